#ifndef SIGHEDGE_TENSOR_SERIES_HPP
#define SIGHEDGE_TENSOR_SERIES_HPP

#include <iosfwd>
#include <utility>
#include <vector>

#include "sighedge/words.hpp"

namespace sighedge {

// Sparse element of the truncated tensor algebra T^trunc(R^dim).
// Coefficients are kept sorted by packed word index (canonical order)
// with exact zeros pruned; absent word means coefficient zero.
struct TensorSeries {
    int dim = 2;
    int trunc = 0;
    std::vector<std::pair<WordIndex, double>> coeffs;

    TensorSeries() = default;
    TensorSeries(int d, int m) : dim(d), trunc(m) {}

    double at(WordIndex w) const;
    bool empty() const { return coeffs.empty(); }
    std::size_t support_size() const { return coeffs.size(); }
    int degree() const;       // max word length in the support, 0 if empty
    double max_abs() const;

    // Sorts, merges duplicates, prunes exact zeros and over-truncation words.
    void normalize();
};

// Series with the single term c.w .
TensorSeries monomial(int dim, int trunc, WordIndex w, double c);
inline TensorSeries unit(int dim, int trunc) { return monomial(dim, trunc, kEmptyWord, 1.0); }

TensorSeries add(const TensorSeries& a, const TensorSeries& b);
TensorSeries sub(const TensorSeries& a, const TensorSeries& b);
TensorSeries scale(const TensorSeries& a, double lambda);

// Concatenation (tensor) product projected onto words of length <= trunc.
TensorSeries concat(const TensorSeries& a, const TensorSeries& b, int trunc);

// Shuffle product projected onto words of length <= trunc.
TensorSeries shuffle(const TensorSeries& a, const TensorSeries& b, int trunc);

// k-fold shuffle power; k = 0 gives the unit.
TensorSeries shuffle_power(const TensorSeries& a, int k, int trunc);

// (a |> u)^v = a^{vu}: strips the terminal word u.
TensorSeries proj_word(const TensorSeries& a, WordIndex u);

// (a|_xi)^v = sum_u a^{vu} xi^u.
TensorSeries proj_series(const TensorSeries& a, const TensorSeries& xi);

// <a, p> = sum_w a^w p^w.
double bracket(const TensorSeries& a, const TensorSeries& p);

// exp_tensor(a) = sum_k a^{tensor k}/k!, requires a^empty = 0.
TensorSeries tensor_exp(const TensorSeries& a, int trunc);

// Embeds a d=2 series into d=3 (zero coefficient on words containing 3).
TensorSeries lift_2_to_3(const TensorSeries& a);
// Inverse on the image: keeps words over {1,2} only.
TensorSeries restrict_3_to_2(const TensorSeries& a);

// Text serialization: one "word=coefficient" line per entry, canonical
// order, round-trip decimals.
void write_tensor(std::ostream& os, const TensorSeries& a);
TensorSeries read_tensor(std::istream& is, int dim, int trunc);

}  // namespace sighedge

#endif
