#include <cmath>
#include <random>

#include "doctest.h"
#include "sighedge/signature.hpp"

using namespace sighedge;

namespace {

SampledPath random_path(std::mt19937_64& rng, int n_seg, double T) {
    std::normal_distribution<double> gauss(0.0, 0.5);
    SampledPath p;
    p.dim = 2;
    double w = 0.0;
    for (int j = 0; j <= n_seg; ++j) {
        p.times.push_back(T * j / n_seg);
        p.values.push_back(p.times.back());
        if (j > 0) w += gauss(rng);
        p.values.push_back(w);
    }
    return p;
}

TensorSeries random_tensor(std::mt19937_64& rng, int max_deg, int n_terms) {
    std::uniform_int_distribution<int> word_dist(
        0, static_cast<int>(word_space_size(2, max_deg)) - 1);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    TensorSeries t(2, max_deg);
    for (int i = 0; i < n_terms; ++i)
        t.coeffs.emplace_back(static_cast<WordIndex>(word_dist(rng)), coef(rng));
    t.normalize();
    return t;
}

bool approx_equal(const TensorSeries& a, const TensorSeries& b, double tol) {
    std::size_t n = word_space_size(a.dim, std::max(a.trunc, b.trunc));
    for (WordIndex w = 0; w < n; ++w)
        if (std::fabs(a.at(w) - b.at(w)) > tol) return false;
    return true;
}

}  // namespace

TEST_CASE("segment signature of a linear segment") {
    double zero[2] = {0.0, 0.0};
    auto s0 = segment_signature(std::span<const double>(zero, 2), 3);
    CHECK(s0.support_size() == 1);
    CHECK(s0.at(kEmptyWord) == 1.0);

    double h = 0.3;
    double seg1[2] = {h, 0.0};
    auto s1 = segment_signature(std::span<const double>(seg1, 2), 3);
    CHECK(s1.at(word_from_string(2, "11")) == doctest::Approx(h * h / 2.0));

    double w = -0.8;
    double seg2[2] = {h, w};
    auto s2 = segment_signature(std::span<const double>(seg2, 2), 3);
    CHECK(s2.at(word_from_string(2, "12")) == doctest::Approx(h * w / 2.0));
    CHECK(s2.at(word_from_string(2, "21")) == doctest::Approx(h * w / 2.0));
}

TEST_CASE("advance composes linear segments") {
    SignatureState st(2, 4);
    double zero[2] = {0.0, 0.0};
    auto st2 = advance(st, std::span<const double>(zero, 2), 0.0);
    CHECK(st2.sig.v == st.sig.v);

    // two half-steps equal one full step on a collinear move
    double full[2] = {0.2, 0.6};
    double half[2] = {0.1, 0.3};
    auto a = advance(st, std::span<const double>(full, 2), 0.2);
    auto b = advance(advance(st, std::span<const double>(half, 2), 0.1),
                     std::span<const double>(half, 2), 0.1);
    for (std::size_t i = 0; i < a.sig.v.size(); ++i)
        CHECK(a.sig.v[i] == doctest::Approx(b.sig.v[i]).epsilon(1e-13));
}

TEST_CASE("path signature basics") {
    // constant path
    SampledPath flat;
    flat.dim = 2;
    flat.times = {0.0, 0.5, 1.0};
    flat.values = {0.0, 3.0, 0.5, 3.0, 1.0, 3.0};
    // constant in the second coordinate; first coordinate is time
    auto sig = path_signature(flat, 3);
    CHECK(sig.at(word_from_string(2, "2")) == doctest::Approx(0.0));
    CHECK(sig.at(word_from_string(2, "1")) == doctest::Approx(1.0));

    // straight line (t, v t): <21, sig> = v T^2 / 2
    double v = 1.7, T = 0.4;
    SampledPath line;
    line.dim = 2;
    for (int j = 0; j <= 4; ++j) {
        line.times.push_back(T * j / 4);
        line.values.push_back(line.times.back());
        line.values.push_back(v * line.times.back());
    }
    auto lsig = path_signature(line, 3);
    CHECK(lsig.at(word_from_string(2, "21")) == doctest::Approx(v * T * T / 2.0));

    SampledPath bad;
    bad.dim = 2;
    bad.times = {0.0, 0.0};
    bad.values = {0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(path_signature(bad, 2), std::invalid_argument);
}

TEST_CASE("Chen identity: full path vs concatenated halves") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        SampledPath p = random_path(rng, 8, 1.0);
        SampledPath first, second;
        first.dim = second.dim = 2;
        for (int j = 0; j <= 4; ++j) {
            first.times.push_back(p.times[j]);
            first.values.push_back(p.values[2 * j]);
            first.values.push_back(p.values[2 * j + 1]);
        }
        for (int j = 4; j <= 8; ++j) {
            second.times.push_back(p.times[j]);
            second.values.push_back(p.values[2 * j]);
            second.values.push_back(p.values[2 * j + 1]);
        }
        auto whole = path_signature(p, 5);
        auto glued = concat(path_signature(first, 5), path_signature(second, 5), 5);
        CHECK(approx_equal(whole, glued, 1e-12));
    }
}

TEST_CASE("shuffle identity on random piecewise-linear paths") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        SampledPath p = random_path(rng, 3, 1.0);
        auto l1 = random_tensor(rng, 3, 3);
        auto l2 = random_tensor(rng, 3, 3);
        auto sig = path_signature(p, 6);
        double lhs = bracket(l1, sig) * bracket(l2, sig);
        double rhs = bracket(shuffle(l1, l2, 6), sig);
        CHECK(std::fabs(lhs - rhs) <=
              1e-10 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)}));
    }
}

TEST_CASE("time reversal inverts the signature") {
    std::mt19937_64 rng(9);
    SampledPath p = random_path(rng, 6, 1.0);
    SampledPath rev;
    rev.dim = 2;
    std::size_t n = p.n_points();
    for (std::size_t j = 0; j < n; ++j) {
        rev.times.push_back(p.times[j]);  // any increasing grid works
        rev.values.push_back(p.values[2 * (n - 1 - j)]);
        rev.values.push_back(p.values[2 * (n - 1 - j) + 1]);
    }
    auto prod = concat(path_signature(p, 4), path_signature(rev, 4), 4);
    CHECK(approx_equal(prod, unit(2, 4), 1e-10));
}

TEST_CASE("expected Bachelier signature") {
    double sigma = 2.0, T = 0.2;
    auto E0 = expected_signature_bachelier(0.0, sigma, 4);
    CHECK(approx_equal(E0, unit(2, 4), 0.0));

    auto E = expected_signature_bachelier(T, sigma, 4);
    CHECK(E.at(word_from_string(2, "1")) == doctest::Approx(T));
    CHECK(E.at(word_from_string(2, "2")) == 0.0);
    CHECK(E.at(word_from_string(2, "22")) == doctest::Approx(sigma * sigma * T / 2));

    // <21 shuffle 21, E_T> = sigma^2 T^3 / 3 (variance of int (S-S0) dt)
    auto l = monomial(2, 2, word_from_string(2, "21"), 1.0);
    auto sq = shuffle(l, l, 4);
    CHECK(bracket(sq, E) == doctest::Approx(sigma * sigma * T * T * T / 3.0));
}

TEST_CASE("MC expected signature: deterministic case") {
    auto res = mc_expected_signature(0.0, 0.0, 0.5, 3, 3, 16, 1);
    CHECK(res.mean.at(kEmptyWord) == doctest::Approx(1.0));
    CHECK(res.mean.at(word_from_string(2, "1")) == doctest::Approx(0.5));
    CHECK(res.mean.at(word_from_string(2, "11")) == doctest::Approx(0.125));
    CHECK(res.mean.at(word_from_string(2, "2")) == 0.0);
}

TEST_CASE("MC expected signature converges to the Fawcett formula") {
    double sigma = 2.0, T = 0.2;
    auto res = mc_expected_signature(sigma, 0.0, T, 4, 20000, 64, 2024);
    auto exact = expected_signature_bachelier(T, sigma, 4);
    // every entry within 5 standard errors (4 at the acceptance size)
    for (WordIndex w = 0; w < word_space_size(2, 4); ++w) {
        double se = res.std_error.at(w);
        double tol = 5.0 * se + 1e-12;
        CHECK(std::fabs(res.mean.at(w) - exact.at(w)) <= tol);
    }
    // drift-free first order entry close to zero
    CHECK(std::fabs(res.mean.at(word_from_string(2, "2"))) <=
          3.0 * res.std_error.at(word_from_string(2, "2")));
    // entry 22 near sigma^2 T / 2 = 0.4
    CHECK(res.mean.at(word_from_string(2, "22")) ==
          doctest::Approx(0.4).epsilon(0.05));
}
