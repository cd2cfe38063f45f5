#include <cmath>

#include "doctest.h"
#include "sighedge/riccati.hpp"

using namespace sighedge;

namespace {

MarketParams paper_market() {
    MarketParams m;
    m.mu = 0.0;
    m.sigma = 2.0;
    m.T = 0.2;
    m.eta = 0.001;
    m.nu = 0.001;
    m.lambda = 0.01;
    m.S0 = 10.0;
    m.X0 = 0.0;
    return m;
}

SignaturePayoff asian_quadratic(double nominal = 200.0) {
    double alpha[3] = {0.0, 0.0, 1.0};
    return asian_poly(alpha, 10.0, 10.0, nominal, 0.2);
}

SignaturePayoff european_quadratic(double nominal = 200.0) {
    double alpha[3] = {0.0, 0.0, 1.0};
    return european_poly(alpha, 10.0, 10.0, nominal, 0.2);
}

}  // namespace

TEST_CASE("rhs vanishing cases") {
    RiccatiParams p;
    p.market = paper_market();
    p.market.nu = 0.0;
    p.market.lambda = 1e-300;  // lambda > 0 required; effectively zero
    p.payoff = asian_quadratic();
    p.n_ode = 16;

    // psi = 0, nu = 0, mu = 0: rhs reduces to -(lambda sigma^2/2) B^sh2
    TensorSeries psi0(3, p.effective_trunc());
    auto rhs = riccati_rhs(psi0, 0.1, p);
    auto B = add(add(monomial(3, p.effective_trunc(), word_from_string(3, "3"), 1.0),
                     monomial(3, p.effective_trunc(), kEmptyWord, p.market.X0)),
                 scale(lift_2_to_3(proj_word(xi_at(p.payoff, 0.1, p.market.sigma),
                                             word_from_string(2, "2"))),
                       -1.0));
    auto expected = scale(shuffle(B, B, p.effective_trunc()),
                          -0.5 * p.market.lambda * p.market.sigma * p.market.sigma);
    for (const auto& [w, c] : expected.coeffs)
        CHECK(rhs.at(w) == doctest::Approx(c).epsilon(1e-12));

    // effectively zero lambda and nu: psi stays ~0
    auto sol = solve_backward(p);
    CHECK(std::fabs(sol.psi0_empty()) < 1e-250);
}

TEST_CASE("xi-tilde never ends in letter 3") {
    RiccatiParams p;
    p.market = paper_market();
    p.payoff = asian_quadratic();
    TensorSeries lifted = lift_2_to_3(
        proj_word(xi_at(p.payoff, 0.07, p.market.sigma), word_from_string(2, "2")));
    CHECK(proj_word(lifted, word_from_string(3, "3")).empty());
}

TEST_CASE("european quadratic stays in the small shuffle-closed span") {
    RiccatiParams p;
    p.market = paper_market();
    p.payoff = european_quadratic();
    p.n_ode = 200;
    CHECK(p.effective_trunc() == 2);
    auto sol = solve_backward(p);
    // support {e, 2, 3, 22, 23, 32, 33} only
    const char* allowed[] = {"2", "3", "22", "23", "32", "33"};
    for (int k = 0; k <= p.n_ode; k += 40) {
        TensorSeries s = sol.psi[k].to_series();
        for (const auto& [w, c] : s.coeffs) {
            bool ok = (w == kEmptyWord);
            for (const char* a : allowed)
                if (w == word_from_string(3, a)) ok = true;
            if (!ok) CHECK(std::fabs(c) < 1e-10);
        }
    }
}

TEST_CASE("solve_backward matches the European quadratic closed form") {
    RiccatiParams p;
    p.market = paper_market();
    p.payoff = european_quadratic();
    p.n_ode = 2000;
    const double gamma = 2.0 * 200.0;  // xi = Gamma 22
    auto numeric = solve_backward(p);
    auto closed = closed_form_eu_quadratic(p, gamma, 10);

    // psi^{33} = f(t), psi^{e} includes the integral term
    for (int k = 0; k <= 10; ++k) {
        double t = closed.times[k];
        DenseTensor interp(3, numeric.trunc);
        numeric.interpolate(t, interp);
        for (std::size_t w = 0; w < interp.v.size(); ++w) {
            double a = interp.v[w];
            double b = closed.psi[k].v[w];
            CHECK(std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(b)));
        }
    }
}

TEST_CASE("closed-form preconditions are named errors") {
    RiccatiParams p;
    p.market = paper_market();
    p.payoff = european_quadratic();
    CHECK_THROWS_AS(closed_form_no_permanent(p, 4, 32), std::invalid_argument);

    MarketParams bad = paper_market();
    bad.nu = 1.0;  // >= sqrt(2 eta lambda sigma^2)
    CHECK_THROWS_AS(eu_quadratic_gain(0.0, bad, 400.0), std::invalid_argument);
    MarketParams bad2 = paper_market();
    bad2.mu = 0.01;
    CHECK_THROWS_AS(eu_quadratic_gain(0.0, bad2, 400.0), std::invalid_argument);
    CHECK_THROWS_AS(eu_quadratic_gain(0.0, paper_market(), 1.0e4), std::invalid_argument);
}

TEST_CASE("no-permanent closed form validates the solver at nu = 0") {
    RiccatiParams p;
    p.market = paper_market();
    p.market.nu = 0.0;
    p.payoff = asian_quadratic();
    p.n_ode = 400;

    // f(T) = 0 and f(0) = c tanh(cT/eta)
    CHECK(no_permanent_gain(p.market.T, p.market) == doctest::Approx(0.0));
    double c = std::sqrt(0.5 * p.market.lambda * p.market.sigma * p.market.sigma *
                         p.market.eta);
    CHECK(no_permanent_gain(0.0, p.market) ==
          doctest::Approx(c * std::tanh(c * p.market.T / p.market.eta)));
    // Prop 5.5 at nu -> 0 coincides with the no-permanent gain
    MarketParams m0 = p.market;
    m0.nu = 0.0;
    CHECK(eu_quadratic_gain(0.05, m0, 400.0) ==
          doctest::Approx(no_permanent_gain(0.05, m0)).epsilon(1e-12));

    auto numeric = solve_backward(p);
    auto closed = closed_form_no_permanent(p, 4, 64);
    double n0 = numeric.psi0_empty();
    double c0 = closed.psi0_empty();
    CHECK(std::fabs(n0 - c0) / std::fabs(c0) < 1e-3);
}

TEST_CASE("RK4 order: Richardson ratio near 16") {
    RiccatiParams p;
    p.market = paper_market();
    p.payoff = asian_quadratic();

    auto value = [&](int n) {
        RiccatiParams q = p;
        q.n_ode = n;
        return solve_backward(q).psi0_empty();
    };
    double v1 = value(25), v2 = value(50), v3 = value(100);
    double ratio = (v1 - v2) / (v3 != v2 ? (v2 - v3) : 1e-300);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("blow-up guard reports divergence") {
    RiccatiParams p;
    p.market = paper_market();
    p.market.eta = 1e-12;  // enormous quadratic gain: divergence
    p.market.nu = 0.5e-6;
    p.payoff = asian_quadratic(2e5);
    p.n_ode = 50;
    CHECK_THROWS_AS(solve_backward(p), RiccatiBlowup);
    CHECK_THROWS_AS(solve_backward(RiccatiParams{paper_market(), asian_quadratic(), 0, 1}),
                    std::invalid_argument);
}

TEST_CASE("table-1 style nu sweep is monotone") {
    RiccatiParams p;
    p.market = paper_market();
    p.payoff = asian_quadratic();
    p.n_ode = 300;  // coarse grid is enough for ordering
    double prev = -1.0;
    for (double nu : {0.0, 5e-4, 1e-3, 1.5e-3}) {
        RiccatiParams q = p;
        q.market.nu = nu;
        double v = solve_backward(q).psi0_empty();
        CHECK(v > prev);
        prev = v;
    }
}
