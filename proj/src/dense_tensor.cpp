#include "sighedge/dense_tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace sighedge {

double DenseTensor::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

DenseTensor DenseTensor::from_series(const TensorSeries& a, int trunc) {
    DenseTensor d(a.dim, trunc);
    for (const auto& [w, c] : a.coeffs) {
        if (w < d.v.size()) d.v[w] = c;
    }
    return d;
}

TensorSeries DenseTensor::to_series() const {
    TensorSeries r(dim, trunc);
    for (std::size_t w = 0; w < v.size(); ++w)
        if (v[w] != 0.0) r.coeffs.emplace_back(static_cast<WordIndex>(w), v[w]);
    return r;
}

void axpy(DenseTensor& out, double lambda, const DenseTensor& a) {
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += lambda * a.v[i];
}

void proj_word_into(DenseTensor& out, const DenseTensor& a, WordIndex u, int len_u) {
    if (out.dim != a.dim || out.trunc != a.trunc)
        throw std::invalid_argument("proj_word_into: shape mismatch");
    out.set_zero();
    const std::size_t n = word_space_size(a.dim, a.trunc - len_u);
    const std::uint64_t shift = int_pow(a.dim, len_u);
    for (std::size_t v = 0; v < n; ++v) out.v[v] = a.v[v * shift + u];
}

namespace {

// Accumulates c times the shuffle of two explicit words into scratch.
void shuffle_into(int dim, const std::uint8_t* u, int iu, int nu,
                  const std::uint8_t* v, int iv, int nv, WordIndex idx, double c,
                  double* scratch) {
    if (iu == nu && iv == nv) {
        scratch[idx] += c;
        return;
    }
    if (iu < nu)
        shuffle_into(dim, u, iu + 1, nu, v, iv, nv, word_append(dim, idx, u[iu]), c,
                     scratch);
    if (iv < nv)
        shuffle_into(dim, u, iu, nu, v, iv + 1, nv, word_append(dim, idx, v[iv]), c,
                     scratch);
}

}  // namespace

void add_shuffle(DenseTensor& out, const DenseTensor& a, const DenseTensor& b,
                 double lambda) {
    const int trunc = out.trunc;
    const WordTable& tab = word_table(out.dim, trunc);
    for (std::size_t wa = 0; wa < a.v.size(); ++wa) {
        double ca = a.v[wa];
        if (ca == 0.0) continue;
        int la = tab.len[wa];
        if (la > trunc) continue;
        const std::uint8_t* du = tab.word(static_cast<WordIndex>(wa));
        std::size_t limit = word_space_size(out.dim, trunc - la);
        for (std::size_t wb = 0; wb < limit && wb < b.v.size(); ++wb) {
            double cb = b.v[wb];
            if (cb == 0.0) continue;
            shuffle_into(out.dim, du, 0, la, tab.word(static_cast<WordIndex>(wb)), 0,
                         tab.len[wb], kEmptyWord, lambda * ca * cb, out.v.data());
        }
    }
}

void add_shuffle_square(DenseTensor& out, const DenseTensor& a, double lambda) {
    const int trunc = out.trunc;
    const WordTable& tab = word_table(out.dim, trunc);
    for (std::size_t wa = 0; wa < a.v.size(); ++wa) {
        double ca = a.v[wa];
        if (ca == 0.0) continue;
        int la = tab.len[wa];
        if (2 * la <= trunc)
            shuffle_into(out.dim, tab.word(static_cast<WordIndex>(wa)), 0, la,
                         tab.word(static_cast<WordIndex>(wa)), 0, la, kEmptyWord,
                         lambda * ca * ca, out.v.data());
        std::size_t limit = word_space_size(out.dim, trunc - la);
        for (std::size_t wb = wa + 1; wb < limit && wb < a.v.size(); ++wb) {
            double cb = a.v[wb];
            if (cb == 0.0) continue;
            shuffle_into(out.dim, tab.word(static_cast<WordIndex>(wa)), 0, la,
                         tab.word(static_cast<WordIndex>(wb)), 0, tab.len[wb],
                         kEmptyWord, 2.0 * lambda * ca * cb, out.v.data());
        }
    }
}

double dot(const DenseTensor& a, const DenseTensor& b) {
    double s = 0.0;
    std::size_t n = std::min(a.v.size(), b.v.size());
    for (std::size_t i = 0; i < n; ++i) s += a.v[i] * b.v[i];
    return s;
}

}  // namespace sighedge
