#include "sighedge/signature.hpp"

#include <cmath>
#include <stdexcept>

#include "sighedge/rng.hpp"

namespace sighedge {

void SampledPath::validate() const {
    if (times.empty()) throw std::invalid_argument("SampledPath: empty grid");
    if (values.size() != times.size() * static_cast<std::size_t>(dim))
        throw std::invalid_argument("SampledPath: values/grid size mismatch");
    for (std::size_t j = 1; j < times.size(); ++j)
        if (!(times[j] > times[j - 1]))
            throw std::invalid_argument("SampledPath: non-increasing time grid");
    for (double x : values)
        if (!std::isfinite(x)) throw std::invalid_argument("SampledPath: non-finite value");
}

void chen_advance(DenseTensor& sig, const double* dx, ChenWorkspace& ws) {
    const int d = sig.dim;
    const int m = sig.trunc;
    double* seg = ws.seg.data();

    // Segment exponential levels: seg_k = seg_{k-1} (x) dx / k.
    seg[0] = 1.0;
    std::size_t prev_off = 0, prev_size = 1;
    for (int k = 1; k <= m; ++k) {
        std::size_t off = level_offset(d, k);
        double inv = 1.0 / k;
        double* out = seg + off;
        const double* in = seg + prev_off;
        for (std::size_t i = 0; i < prev_size; ++i) {
            double c = in[i] * inv;
            for (int l = 0; l < d; ++l) out[i * d + l] = c * dx[l];
        }
        prev_off = off;
        prev_size *= d;
    }

    // In-place concatenation, top level first so lower levels are still the
    // old values when read.
    double* a = sig.v.data();
    for (int n = m; n >= 1; --n) {
        double* dest = a + level_offset(d, n);
        for (int k = 1; k <= n; ++k) {
            const double* lhs = a + level_offset(d, n - k);
            std::size_t size_lhs = level_size(d, n - k);
            const double* rhs = seg + level_offset(d, k);
            std::size_t size_rhs = level_size(d, k);
            double* out = dest;
            for (std::size_t i = 0; i < size_lhs; ++i) {
                double c = lhs[i];
                if (c != 0.0) {
                    const double* r = rhs;
                    double* o = out;
                    for (std::size_t j = 0; j < size_rhs; ++j) o[j] += c * r[j];
                }
                out += size_rhs;
            }
        }
    }
}

TensorSeries segment_signature(std::span<const double> dx, int trunc) {
    const int d = static_cast<int>(dx.size());
    DenseTensor sig(d, trunc);
    sig.v[0] = 1.0;
    ChenWorkspace ws(d, trunc);
    chen_advance(sig, dx.data(), ws);
    return sig.to_series();
}

SignatureState advance(const SignatureState& state, std::span<const double> dx,
                       double dt) {
    SignatureState next = state;
    ChenWorkspace ws(next.sig.dim, next.sig.trunc);
    chen_advance(next.sig, dx.data(), ws);
    next.t += dt;
    return next;
}

TensorSeries path_signature(const SampledPath& path, int trunc) {
    path.validate();
    const int d = path.dim;
    DenseTensor sig(d, trunc);
    sig.v[0] = 1.0;
    ChenWorkspace ws(d, trunc);
    std::vector<double> dx(d);
    for (std::size_t j = 1; j < path.n_points(); ++j) {
        const double* prev = path.point(j - 1);
        const double* cur = path.point(j);
        for (int i = 0; i < d; ++i) dx[i] = cur[i] - prev[i];
        chen_advance(sig, dx.data(), ws);
    }
    return sig.to_series();
}

TensorSeries expected_signature_bachelier(double t, double sigma, int trunc) {
    if (t < 0.0) throw std::invalid_argument("expected_signature_bachelier: t < 0");
    TensorSeries gen(2, trunc);
    WordIndex w1 = word_from_string(2, "1");
    WordIndex w22 = word_from_string(2, "22");
    gen.coeffs.emplace_back(w1, t);
    if (trunc >= 2 && sigma != 0.0)
        gen.coeffs.emplace_back(w22, 0.5 * sigma * sigma * t);
    gen.normalize();
    return tensor_exp(gen, trunc);
}

McSignatureResult mc_expected_signature(double sigma, double mu, double T, int trunc,
                                        int n_paths, int n_steps, std::uint64_t seed) {
    if (n_paths < 1 || n_steps < 1)
        throw std::invalid_argument("mc_expected_signature: need n_paths, n_steps >= 1");
    const std::size_t n_words = word_space_size(2, trunc);
    std::vector<double> sum(n_words, 0.0), sum2(n_words, 0.0);
    const double dt = T / n_steps;
    const double sdt = std::sqrt(dt);
    ChenWorkspace ws(2, trunc);
    DenseTensor sig(2, trunc);
    for (int p = 0; p < n_paths; ++p) {
        auto rng = path_rng(seed, static_cast<std::uint64_t>(p));
        std::normal_distribution<double> gauss(0.0, 1.0);
        sig.set_zero();
        sig.v[0] = 1.0;
        for (int k = 0; k < n_steps; ++k) {
            double dx[2] = {dt, mu * dt + sigma * sdt * gauss(rng)};
            chen_advance(sig, dx, ws);
        }
        for (std::size_t w = 0; w < n_words; ++w) {
            sum[w] += sig.v[w];
            sum2[w] += sig.v[w] * sig.v[w];
        }
    }
    McSignatureResult res;
    res.mean = TensorSeries(2, trunc);
    res.std_error = TensorSeries(2, trunc);
    for (std::size_t w = 0; w < n_words; ++w) {
        double m = sum[w] / n_paths;
        double var = std::max(0.0, sum2[w] / n_paths - m * m);
        double se = n_paths > 1 ? std::sqrt(var / (n_paths - 1)) : 0.0;
        if (m != 0.0) res.mean.coeffs.emplace_back(static_cast<WordIndex>(w), m);
        if (se != 0.0) res.std_error.coeffs.emplace_back(static_cast<WordIndex>(w), se);
    }
    return res;
}

}  // namespace sighedge
