#include <cmath>
#include <random>

#include "doctest.h"
#include "sighedge/payoffs.hpp"

using namespace sighedge;

namespace {
const double kSigma = 2.0;
const double kT = 0.2;
const double kS0 = 10.0;
const double kNominal = 200.0;

SignaturePayoff asian_quadratic() {
    double alpha[3] = {0.0, 0.0, 1.0};
    return asian_poly(alpha, kS0, kS0, kNominal, kT);
}

SignaturePayoff european_quadratic() {
    double alpha[3] = {0.0, 0.0, 1.0};
    return european_poly(alpha, kS0, kS0, kNominal, kT);
}
}  // namespace

TEST_CASE("european polynomial representations") {
    double fwd[2] = {0.0, 1.0};
    auto f = european_poly(fwd, kS0, kS0, kNominal, kT);
    CHECK(f.xi.support_size() == 1);
    CHECK(f.xi.at(word_from_string(2, "2")) == doctest::Approx(kNominal));

    auto q = european_quadratic();
    CHECK(q.xi.support_size() == 1);
    CHECK(q.xi.at(word_from_string(2, "22")) == doctest::Approx(2.0 * kNominal));

    // Bachelier price N sigma^2 T = 160
    auto E = expected_signature_bachelier(kT, kSigma, q.xi.trunc);
    CHECK(bracket(q.xi, E) == doctest::Approx(kNominal * kSigma * kSigma * kT));
}

TEST_CASE("asian polynomial representations") {
    auto q = asian_quadratic();
    // xi = N/T^2 (2 . 2121 + 4 . 2211)
    CHECK(q.xi.at(word_from_string(2, "2121")) ==
          doctest::Approx(2.0 * kNominal / (kT * kT)));
    CHECK(q.xi.at(word_from_string(2, "2211")) ==
          doctest::Approx(4.0 * kNominal / (kT * kT)));
    CHECK(q.xi.support_size() == 2);

    // Bachelier price N sigma^2 T / 3 = 53.333...
    auto E = expected_signature_bachelier(kT, kSigma, q.xi.trunc);
    CHECK(bracket(q.xi, E) ==
          doctest::Approx(kNominal * kSigma * kSigma * kT / 3.0).epsilon(1e-12));

    // centered average forward prices to zero
    double fwd[2] = {0.0, 1.0};
    auto lin = asian_poly(fwd, kS0, kS0, kNominal, kT);
    CHECK(lin.xi.at(word_from_string(2, "21")) == doctest::Approx(kNominal / kT));
    auto El = expected_signature_bachelier(kT, kSigma, lin.xi.trunc);
    CHECK(bracket(lin.xi, El) == doctest::Approx(0.0));
}

TEST_CASE("xi_at propagates the payoff tensor") {
    auto q = european_quadratic();
    // at maturity xi_T = xi
    auto xT = xi_at(q, kT, kSigma);
    CHECK(xT.at(word_from_string(2, "22")) == doctest::Approx(2.0 * kNominal));
    CHECK(xT.support_size() == 1);

    // xi_t = 2N 22 + e N sigma^2 (T - t)
    double t = 0.08;
    auto xt = xi_at(q, t, kSigma);
    CHECK(xt.at(word_from_string(2, "22")) == doctest::Approx(2.0 * kNominal));
    CHECK(xt.at(kEmptyWord) ==
          doctest::Approx(kNominal * kSigma * kSigma * (kT - t)));

    // price at inception equals the empty coefficient of xi_0
    auto x0 = xi_at(q, 0.0, kSigma);
    auto E = expected_signature_bachelier(kT, kSigma, q.xi.trunc);
    CHECK(x0.at(kEmptyWord) == doctest::Approx(bracket(q.xi, E)));

    CHECK_THROWS_AS(xi_at(q, -0.01, kSigma), std::invalid_argument);
    CHECK_THROWS_AS(xi_at(q, kT + 0.01, kSigma), std::invalid_argument);
}

TEST_CASE("asian quadratic xi_0 |> 2 matches the Bachelier delta structure") {
    auto q = asian_quadratic();
    auto x0 = xi_at(q, 0.0, kSigma);
    auto d = proj_word(x0, word_from_string(2, "2"));
    // (2N/T) 21 + 2N 2: reproduces Delta_t = 2N (m_t - K)(T-t)/T at t=0
    CHECK(d.at(word_from_string(2, "21")) == doctest::Approx(2.0 * kNominal / kT));
    CHECK(d.at(word_from_string(2, "2")) == doctest::Approx(2.0 * kNominal));
    CHECK(d.at(kEmptyWord) == doctest::Approx(0.0));  // ATM delta is zero
}

TEST_CASE("xi ode residual is small and O(h^2)") {
    auto payoffs = {asian_quadratic(), european_quadratic()};
    for (const auto& p : payoffs) {
        double r1 = xi_ode_residual(p, 0.1, kSigma, 1e-6);
        CHECK(r1 < 1e-6);
        double r2 = xi_ode_residual(p, 0.1, kSigma, 1e-5);
        double r3 = xi_ode_residual(p, 0.1, kSigma, 1e-4);
        // Richardson: x10 step -> x100 residual (allow slack for tiny values)
        if (r3 > 1e-12) CHECK(r3 / std::max(r2, 1e-300) > 30.0);
    }
    // constant-in-t tensor: exact zero
    double fwd[2] = {0.0, 1.0};
    auto f = european_poly(fwd, kS0, kS0, kNominal, kT);
    CHECK(xi_ode_residual(f, 0.1, kSigma, 1e-6) == doctest::Approx(0.0));
}

TEST_CASE("path payoffs on explicit paths") {
    SampledPath flat;
    flat.dim = 2;
    double K = 10.0;
    for (int j = 0; j <= 4; ++j) {
        flat.times.push_back(kT * j / 4);
        flat.values.push_back(flat.times.back());
        flat.values.push_back(K);
    }
    CHECK(evaluate_path_payoff({PayoffKind::EuropeanCall, K, 0.0, kNominal}, flat) ==
          0.0);

    SampledPath up;
    up.dim = 2;
    for (int j = 0; j <= 4; ++j) {
        up.times.push_back(kT * j / 4);
        up.values.push_back(up.times.back());
        up.values.push_back(10.0 + 0.1 * j);
    }
    CHECK(evaluate_path_payoff({PayoffKind::LookbackFloatCall, 0.0, 0.0, kNominal},
                               up) == doctest::Approx(kNominal * 0.4));
    CHECK(evaluate_path_payoff({PayoffKind::OneTouchMax, 0.0, 1.05 * kS0, kNominal},
                               up) == 0.0);

    SampledPath peak = up;
    peak.values[2 * 3 + 1] = 1.06 * kS0;  // spike above the barrier
    CHECK(evaluate_path_payoff({PayoffKind::OneTouchMax, 0.0, 1.05 * kS0, kNominal},
                               peak) == doctest::Approx(kNominal));

    // asian quadratic on the rising path: trapezoid average
    double avg = 0.0;
    for (int j = 1; j <= 4; ++j)
        avg += 0.5 * (up.values[2 * j + 1] + up.values[2 * (j - 1) + 1]) * (kT / 4);
    avg /= kT;
    double expected = kNominal * (avg - K) * (avg - K);
    CHECK(evaluate_path_payoff({PayoffKind::AsianQuadratic, K, 0.0, kNominal}, up) ==
          doctest::Approx(expected));
}

TEST_CASE("asian quadratic: signature bracket equals trapezoid evaluation") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 0.3);
    auto q = asian_quadratic();
    for (int rep = 0; rep < 5; ++rep) {
        SampledPath p;
        p.dim = 2;
        double s = kS0;
        int n = 64;
        for (int j = 0; j <= n; ++j) {
            p.times.push_back(kT * j / n);
            p.values.push_back(p.times.back());
            if (j > 0) s += gauss(rng);
            p.values.push_back(s);
        }
        double direct =
            evaluate_path_payoff({PayoffKind::AsianQuadratic, kS0, 0.0, kNominal}, p);
        double via_sig = bracket(q.xi, path_signature(p, q.xi.trunc));
        CHECK(direct == doctest::Approx(via_sig).epsilon(1e-10));
    }
}

TEST_CASE("martingale property of the running mark") {
    // Analytic form: <xi_t, E_t> = xi_0^e via the group property of E.
    auto q = asian_quadratic();
    double p0 = xi_at(q, 0.0, kSigma).at(kEmptyWord);
    for (double t : {0.05, 0.1, 0.15}) {
        auto xt = xi_at(q, t, kSigma);
        double anchored = bracket(xt, expected_signature_bachelier(t, kSigma, q.xi.trunc));
        CHECK(anchored == doctest::Approx(p0).epsilon(1e-12));
    }

    // Monte-Carlo form: the sample mean of <xi_t, sig_t> stays within three
    // standard errors of the price for mu = 0.
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n_paths = 4000, n_steps = 40;
    const double dt = kT / n_steps, sdt = std::sqrt(dt);
    std::vector<double> marks[3];
    const int checkpoints[3] = {10, 20, 30};
    ChenWorkspace ws(2, q.xi.trunc);
    for (int p = 0; p < n_paths; ++p) {
        DenseTensor sig(2, q.xi.trunc);
        sig.v[0] = 1.0;
        for (int k = 0, c = 0; k < n_steps; ++k) {
            double dx[2] = {dt, kSigma * sdt * gauss(rng)};
            chen_advance(sig, dx, ws);
            if (c < 3 && k + 1 == checkpoints[c]) {
                auto xt = xi_at(q, (k + 1) * dt, kSigma);
                double v = 0.0;
                for (const auto& [w, coef] : xt.coeffs) v += coef * sig.v[w];
                marks[c].push_back(v);
                ++c;
            }
        }
    }
    for (int c = 0; c < 3; ++c) {
        double sum = 0.0, sum2 = 0.0;
        for (double v : marks[c]) sum += v, sum2 += v * v;
        double mean = sum / n_paths;
        double se = std::sqrt((sum2 / n_paths - mean * mean) / (n_paths - 1));
        CHECK(std::fabs(mean - p0) <= 3.5 * se);
    }
}

TEST_CASE("bachelier closed forms") {
    // ATM call: sigma sqrt(T) phi(0)
    CHECK(bachelier_call_price(kS0, kS0, kSigma, kT) ==
          doctest::Approx(kSigma * std::sqrt(kT) / std::sqrt(2 * M_PI)));
    CHECK(bachelier_call_delta(kS0, kS0, kSigma, kT) == doctest::Approx(0.5));
    // asian call at t=0: sigma sqrt(T/3) phi(0)
    CHECK(bachelier_asian_call_price(0.0, kS0, 0.0, kS0, kSigma, kT) ==
          doctest::Approx(kSigma * std::sqrt(kT / 3.0) / std::sqrt(2 * M_PI)));
    CHECK(bachelier_asian_call_delta(0.0, kS0, 0.0, kS0, kSigma, kT) ==
          doctest::Approx(0.5));
}
