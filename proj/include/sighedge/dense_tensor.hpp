#ifndef SIGHEDGE_DENSE_TENSOR_HPP
#define SIGHEDGE_DENSE_TENSOR_HPP

#include <vector>

#include "sighedge/tensor_series.hpp"

namespace sighedge {

// Flat coefficient array over all words of length <= trunc, indexed by the
// packed word encoding. Used where the sparse representation is too slow:
// the Riccati right-hand side and the per-step Chen updates in the
// simulator. Level n occupies the contiguous block
// [level_offset(n), level_offset(n+1)).
struct DenseTensor {
    int dim = 3;
    int trunc = 0;
    std::vector<double> v;

    DenseTensor() = default;
    DenseTensor(int d, int m) : dim(d), trunc(m), v(word_space_size(d, m), 0.0) {}

    void set_zero() { std::fill(v.begin(), v.end(), 0.0); }
    double max_abs() const;

    static DenseTensor from_series(const TensorSeries& a, int trunc);
    TensorSeries to_series() const;
};

// out += lambda * a
void axpy(DenseTensor& out, double lambda, const DenseTensor& a);

// out[v] = a[v . letters(u)] for the fixed suffix word u; zero above
// trunc - |u|. out must share dim/trunc with a.
void proj_word_into(DenseTensor& out, const DenseTensor& a, WordIndex u, int len_u);

// out += lambda * (a shuffle a), projected onto words of length <= trunc.
// Skips zero coefficients, exploits symmetry of the square.
void add_shuffle_square(DenseTensor& out, const DenseTensor& a, double lambda);

// out += lambda * (a shuffle b), projected truncation as above.
void add_shuffle(DenseTensor& out, const DenseTensor& a, const DenseTensor& b,
                 double lambda);

double dot(const DenseTensor& a, const DenseTensor& b);

}  // namespace sighedge

#endif
