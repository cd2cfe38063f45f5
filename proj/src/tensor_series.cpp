#include "sighedge/tensor_series.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sighedge {

const WordTable& word_table(int dim, int trunc) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, WordTable> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(dim, trunc);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    WordTable t;
    t.dim = dim;
    t.trunc = trunc;
    std::size_t n = word_space_size(dim, trunc);
    t.len.resize(n);
    t.digits.assign(n * static_cast<std::size_t>(trunc > 0 ? trunc : 1), 0);
    std::vector<std::uint8_t> d;
    for (std::size_t w = 0; w < n; ++w) {
        word_digits(dim, static_cast<WordIndex>(w), d);
        t.len[w] = static_cast<std::uint8_t>(d.size());
        std::copy(d.begin(), d.end(),
                  t.digits.begin() + w * static_cast<std::size_t>(trunc > 0 ? trunc : 1));
    }
    return cache.emplace(key, std::move(t)).first->second;
}

double TensorSeries::at(WordIndex w) const {
    auto it = std::lower_bound(coeffs.begin(), coeffs.end(), w,
                               [](const auto& p, WordIndex x) { return p.first < x; });
    if (it != coeffs.end() && it->first == w) return it->second;
    return 0.0;
}

int TensorSeries::degree() const {
    if (coeffs.empty()) return 0;
    return word_length(dim, coeffs.back().first);
}

double TensorSeries::max_abs() const {
    double m = 0.0;
    for (const auto& [w, c] : coeffs) m = std::max(m, std::fabs(c));
    return m;
}

void TensorSeries::normalize() {
    std::sort(coeffs.begin(), coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<WordIndex, double>> out;
    out.reserve(coeffs.size());
    const std::size_t limit = word_space_size(dim, trunc);
    for (const auto& [w, c] : coeffs) {
        if (w >= limit) continue;
        if (!out.empty() && out.back().first == w)
            out.back().second += c;
        else
            out.emplace_back(w, c);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& p) { return p.second == 0.0; }),
              out.end());
    coeffs = std::move(out);
}

TensorSeries monomial(int dim, int trunc, WordIndex w, double c) {
    TensorSeries r(dim, trunc);
    if (c != 0.0) r.coeffs.emplace_back(w, c);
    return r;
}

static void require_same_dim(const TensorSeries& a, const TensorSeries& b,
                             const char* op) {
    if (a.dim != b.dim)
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

TensorSeries add(const TensorSeries& a, const TensorSeries& b) {
    require_same_dim(a, b, "add");
    TensorSeries r(a.dim, std::max(a.trunc, b.trunc));
    r.coeffs.reserve(a.coeffs.size() + b.coeffs.size());
    std::size_t i = 0, j = 0;
    while (i < a.coeffs.size() || j < b.coeffs.size()) {
        if (j == b.coeffs.size() ||
            (i < a.coeffs.size() && a.coeffs[i].first < b.coeffs[j].first)) {
            r.coeffs.push_back(a.coeffs[i++]);
        } else if (i == a.coeffs.size() || b.coeffs[j].first < a.coeffs[i].first) {
            r.coeffs.push_back(b.coeffs[j++]);
        } else {
            double c = a.coeffs[i].second + b.coeffs[j].second;
            if (c != 0.0) r.coeffs.emplace_back(a.coeffs[i].first, c);
            ++i;
            ++j;
        }
    }
    return r;
}

TensorSeries sub(const TensorSeries& a, const TensorSeries& b) {
    return add(a, scale(b, -1.0));
}

TensorSeries scale(const TensorSeries& a, double lambda) {
    TensorSeries r(a.dim, a.trunc);
    if (lambda == 0.0) return r;
    r.coeffs.reserve(a.coeffs.size());
    for (const auto& [w, c] : a.coeffs) r.coeffs.emplace_back(w, lambda * c);
    return r;
}

// Shared dense scratch pattern: accumulate into a flat array indexed by
// packed word, then sweep in index order (already canonical).
namespace {

TensorSeries gather(int dim, int trunc, std::vector<double>& scratch) {
    TensorSeries r(dim, trunc);
    for (std::size_t w = 0; w < scratch.size(); ++w) {
        if (scratch[w] != 0.0) {
            r.coeffs.emplace_back(static_cast<WordIndex>(w), scratch[w]);
            scratch[w] = 0.0;
        }
    }
    return r;
}

void shuffle_words_into(int dim, const std::uint8_t* u, int iu, int nu,
                        const std::uint8_t* v, int iv, int nv, WordIndex idx,
                        double c, double* scratch) {
    if (iu == nu && iv == nv) {
        scratch[idx] += c;
        return;
    }
    if (iu < nu)
        shuffle_words_into(dim, u, iu + 1, nu, v, iv, nv,
                           word_append(dim, idx, u[iu]), c, scratch);
    if (iv < nv)
        shuffle_words_into(dim, u, iu, nu, v, iv + 1, nv,
                           word_append(dim, idx, v[iv]), c, scratch);
}

}  // namespace

TensorSeries concat(const TensorSeries& a, const TensorSeries& b, int trunc) {
    require_same_dim(a, b, "concat");
    std::vector<double> scratch(word_space_size(a.dim, trunc), 0.0);
    for (const auto& [wa, ca] : a.coeffs) {
        int la = word_length(a.dim, wa);
        if (la > trunc) continue;
        for (const auto& [wb, cb] : b.coeffs) {
            int lb = word_length(b.dim, wb);
            if (la + lb > trunc) continue;
            scratch[word_concat(a.dim, wa, wb, lb)] += ca * cb;
        }
    }
    return gather(a.dim, trunc, scratch);
}

TensorSeries shuffle(const TensorSeries& a, const TensorSeries& b, int trunc) {
    require_same_dim(a, b, "shuffle");
    std::vector<double> scratch(word_space_size(a.dim, trunc), 0.0);
    std::vector<std::uint8_t> du, dv;
    for (const auto& [wa, ca] : a.coeffs) {
        word_digits(a.dim, wa, du);
        if (static_cast<int>(du.size()) > trunc) continue;
        for (const auto& [wb, cb] : b.coeffs) {
            word_digits(b.dim, wb, dv);
            if (static_cast<int>(du.size() + dv.size()) > trunc) continue;
            shuffle_words_into(a.dim, du.data(), 0, static_cast<int>(du.size()),
                               dv.data(), 0, static_cast<int>(dv.size()),
                               kEmptyWord, ca * cb, scratch.data());
        }
    }
    return gather(a.dim, trunc, scratch);
}

TensorSeries shuffle_power(const TensorSeries& a, int k, int trunc) {
    if (k < 0) throw std::invalid_argument("shuffle_power: negative exponent");
    TensorSeries r = unit(a.dim, trunc);
    for (int i = 0; i < k; ++i) r = shuffle(r, a, trunc);
    return r;
}

TensorSeries proj_word(const TensorSeries& a, WordIndex u) {
    std::vector<std::uint8_t> du;
    word_digits(a.dim, u, du);
    TensorSeries r(a.dim, a.trunc);
    for (const auto& [w, c] : a.coeffs) {
        WordIndex v = w;
        bool match = true;
        for (std::size_t k = du.size(); k-- > 0;) {
            if (v == kEmptyWord || word_last_letter(a.dim, v) != du[k]) {
                match = false;
                break;
            }
            v = word_parent(a.dim, v);
        }
        if (match) r.coeffs.emplace_back(v, c);
    }
    r.normalize();
    return r;
}

TensorSeries proj_series(const TensorSeries& a, const TensorSeries& xi) {
    require_same_dim(a, xi, "proj_series");
    std::vector<double> scratch(word_space_size(a.dim, a.trunc), 0.0);
    std::vector<std::uint8_t> dw;
    for (const auto& [w, c] : a.coeffs) {
        word_digits(a.dim, w, dw);
        int n = static_cast<int>(dw.size());
        // Split w = v.u over all suffix lengths; u packed built by prepending.
        WordIndex u = kEmptyWord;
        std::uint64_t pow = 1;
        for (int k = 0; k <= n; ++k) {
            if (k > 0) {
                u += static_cast<WordIndex>(dw[n - k] * pow);
                pow *= static_cast<std::uint64_t>(a.dim);
            }
            double x = xi.at(u);
            if (x != 0.0) {
                WordIndex v = word_from_digits(a.dim, dw.data(), n - k);
                scratch[v] += c * x;
            }
        }
    }
    return gather(a.dim, a.trunc, scratch);
}

double bracket(const TensorSeries& a, const TensorSeries& p) {
    require_same_dim(a, p, "bracket");
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.coeffs.size() && j < p.coeffs.size()) {
        if (a.coeffs[i].first < p.coeffs[j].first)
            ++i;
        else if (p.coeffs[j].first < a.coeffs[i].first)
            ++j;
        else {
            s += a.coeffs[i].second * p.coeffs[j].second;
            ++i;
            ++j;
        }
    }
    return s;
}

TensorSeries tensor_exp(const TensorSeries& a, int trunc) {
    if (a.at(kEmptyWord) != 0.0)
        throw std::invalid_argument("tensor_exp: nonzero constant term");
    TensorSeries r = unit(a.dim, trunc);
    TensorSeries term = unit(a.dim, trunc);
    for (int k = 1; k <= trunc; ++k) {
        term = scale(concat(term, a, trunc), 1.0 / k);
        if (term.empty()) break;
        r = add(r, term);
    }
    return r;
}

TensorSeries lift_2_to_3(const TensorSeries& a) {
    if (a.dim != 2) throw std::invalid_argument("lift_2_to_3: input must have dim 2");
    TensorSeries r(3, a.trunc);
    std::vector<std::uint8_t> d;
    for (const auto& [w, c] : a.coeffs) {
        word_digits(2, w, d);
        r.coeffs.emplace_back(word_from_digits(3, d.data(), static_cast<int>(d.size())), c);
    }
    r.normalize();
    return r;
}

TensorSeries restrict_3_to_2(const TensorSeries& a) {
    if (a.dim != 3) throw std::invalid_argument("restrict_3_to_2: input must have dim 3");
    TensorSeries r(2, a.trunc);
    std::vector<std::uint8_t> d;
    for (const auto& [w, c] : a.coeffs) {
        word_digits(3, w, d);
        bool ok = true;
        for (auto x : d)
            if (x == 3) { ok = false; break; }
        if (ok)
            r.coeffs.emplace_back(word_from_digits(2, d.data(), static_cast<int>(d.size())), c);
    }
    r.normalize();
    return r;
}

void write_tensor(std::ostream& os, const TensorSeries& a) {
    os << std::setprecision(17);
    for (const auto& [w, c] : a.coeffs)
        os << word_to_string(a.dim, w) << "=" << c << "\n";
}

TensorSeries read_tensor(std::istream& is, int dim, int trunc) {
    TensorSeries r(dim, trunc);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto pos = line.find('=');
        if (pos == std::string::npos)
            throw std::invalid_argument("read_tensor: malformed line: " + line);
        WordIndex w = word_from_string(dim, line.substr(0, pos));
        double c = std::stod(line.substr(pos + 1));
        if (c != 0.0) r.coeffs.emplace_back(w, c);
    }
    r.normalize();
    return r;
}

}  // namespace sighedge
