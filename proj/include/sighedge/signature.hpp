#ifndef SIGHEDGE_SIGNATURE_HPP
#define SIGHEDGE_SIGNATURE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sighedge/dense_tensor.hpp"
#include "sighedge/tensor_series.hpp"

namespace sighedge {

// Piecewise-linear sampled path: strictly increasing time grid and
// d-dimensional values, row-major (J+1) x d.
struct SampledPath {
    int dim = 2;
    std::vector<double> times;
    std::vector<double> values;

    std::size_t n_points() const { return times.size(); }
    const double* point(std::size_t j) const { return values.data() + j * dim; }
    void validate() const;
};

// Running truncated signature of a path, advanced segment by segment via
// Chen's relation. The coefficient array is dense for speed; sig^empty
// stays 1.
struct SignatureState {
    DenseTensor sig;
    double t = 0.0;

    SignatureState(int dim, int trunc, double t0 = 0.0) : sig(dim, trunc), t(t0) {
        sig.v[0] = 1.0;
    }
};

// Workspace for segment-exponential levels, reusable across steps.
struct ChenWorkspace {
    std::vector<double> seg;
    explicit ChenWorkspace(int dim = 3, int trunc = 0)
        : seg(word_space_size(dim, trunc), 0.0) {}
};

// In-place sig <- sig tensor exp(dx), the exact signature update for a
// linear segment with increment dx (length sig.dim).
void chen_advance(DenseTensor& sig, const double* dx, ChenWorkspace& ws);

// Signature of a single linear segment: tensor exponential of the
// one-letter series sum_i dx_i . letter_i.
TensorSeries segment_signature(std::span<const double> dx, int trunc);

SignatureState advance(const SignatureState& state, std::span<const double> dx,
                       double dt);

// Exact Stratonovich signature of the piecewise-linear interpolated path.
TensorSeries path_signature(const SampledPath& path, int trunc);

// Expected signature of the time-augmented Bachelier price (d=2):
// exp_tensor((1 + (sigma^2/2) 22) t).
TensorSeries expected_signature_bachelier(double t, double sigma, int trunc);

struct McSignatureResult {
    TensorSeries mean;          // empirical expected signature
    TensorSeries std_error;     // per-entry standard error of the mean
};

// Monte-Carlo oracle for the expected signature of (t, S_t) with
// dS = mu dt + sigma dW, piecewise-linear lift on n_steps.
McSignatureResult mc_expected_signature(double sigma, double mu, double T, int trunc,
                                        int n_paths, int n_steps, std::uint64_t seed);

}  // namespace sighedge

#endif
