#include "sighedge/riccati.hpp"

#include <algorithm>
#include <cmath>

namespace sighedge {

int RiccatiParams::effective_trunc() const {
    if (trunc > 0) return trunc;
    return 2 * std::max(1, payoff.xi.degree() - 1);
}

namespace {

// Reusable buffers for the dense right-hand side.
struct RhsWorkspace {
    DenseTensor B, G;
    explicit RhsWorkspace(int trunc) : B(3, trunc), G(3, trunc) {}
};

// B = 3 + e X0 - lifted(xi_t |> 2)
void build_B(DenseTensor& B, const RiccatiParams& p, double t) {
    B.set_zero();
    B.v[0] = p.market.X0;
    B.v[3] = 1.0;  // packed index of the word "3" in d=3
    t = std::clamp(t, 0.0, p.payoff.maturity);  // RK4 stage round-off
    TensorSeries xi2 =
        proj_word(xi_at(p.payoff, t, p.market.sigma), word_from_string(2, "2"));
    std::vector<std::uint8_t> digits;
    for (const auto& [w, c] : xi2.coeffs) {
        word_digits(2, w, digits);
        WordIndex w3 = word_from_digits(3, digits.data(), static_cast<int>(digits.size()));
        B.v[w3] -= c;
    }
}

void rhs_into(DenseTensor& out, const DenseTensor& psi, double t,
              const RiccatiParams& p, RhsWorkspace& ws) {
    const MarketParams& m = p.market;
    const int trunc = psi.trunc;
    const std::size_t n_low = word_space_size(3, trunc - 1);
    out.set_zero();

    build_B(ws.B, p, t);

    // -psi|>1 - (sigma^2/2) psi|>22
    const double half_sig2 = 0.5 * m.sigma * m.sigma;
    for (std::size_t i = 0; i < n_low; ++i) out.v[i] -= psi.v[3 * i + 1];
    const std::size_t n_low2 = trunc >= 2 ? word_space_size(3, trunc - 2) : 0;
    for (std::size_t i = 0; i < n_low2; ++i) out.v[i] -= half_sig2 * psi.v[9 * i + 8];

    // -(lambda sigma^2/2) B^sh2
    add_shuffle_square(out, ws.B, -0.5 * m.lambda * m.sigma * m.sigma);

    // +1/(4 eta) (nu B - nu psi|>2 - psi|>3)^sh2
    if (!(m.eta > 0.0)) throw std::invalid_argument("riccati: eta must be positive");
    ws.G.set_zero();
    for (std::size_t i = 0; i < ws.G.v.size(); ++i) ws.G.v[i] = m.nu * ws.B.v[i];
    for (std::size_t i = 0; i < n_low; ++i)
        ws.G.v[i] -= m.nu * psi.v[3 * i + 2] + psi.v[3 * i + 3];
    add_shuffle_square(out, ws.G, 0.25 / m.eta);

    // +mu (B - psi|>2)
    if (m.mu != 0.0) {
        for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += m.mu * ws.B.v[i];
        for (std::size_t i = 0; i < n_low; ++i) out.v[i] -= m.mu * psi.v[3 * i + 2];
    }
}

}  // namespace

TensorSeries riccati_rhs(const TensorSeries& psi, double t, const RiccatiParams& p) {
    if (psi.dim != 3) throw std::invalid_argument("riccati_rhs: psi must have dim 3");
    const int trunc = p.effective_trunc();
    if (psi.degree() > trunc)
        throw std::invalid_argument("riccati_rhs: psi exceeds truncation order");
    DenseTensor dpsi = DenseTensor::from_series(psi, trunc);
    DenseTensor out(3, trunc);
    RhsWorkspace ws(trunc);
    rhs_into(out, dpsi, t, p, ws);
    return out.to_series();
}

RiccatiSolution solve_backward(const RiccatiParams& p) {
    p.market.validate();
    if (p.n_ode < 2) throw std::invalid_argument("solve_backward: n_ode < 2");
    const int trunc = p.effective_trunc();
    const int n = p.n_ode;
    const double T = p.market.T;
    const double h = T / n;

    RiccatiSolution sol;
    sol.market = p.market;
    sol.trunc = trunc;
    sol.dt = h;
    sol.times.resize(n + 1);
    for (int k = 0; k <= n; ++k) sol.times[k] = k * h;
    sol.times[n] = T;
    sol.psi.assign(n + 1, DenseTensor(3, trunc));
    sol.dpsi.assign(n + 1, DenseTensor(3, trunc));

    RhsWorkspace ws(trunc);
    DenseTensor k1(3, trunc), k2(3, trunc), k3(3, trunc), k4(3, trunc), tmp(3, trunc);

    // psi(T) = 0; march backward with step -h.
    for (int k = n; k >= 1; --k) {
        const double t = sol.times[k];
        const DenseTensor& cur = sol.psi[k];

        rhs_into(k1, cur, t, p, ws);
        sol.dpsi[k] = k1;

        tmp = cur;
        axpy(tmp, -0.5 * h, k1);
        rhs_into(k2, tmp, t - 0.5 * h, p, ws);

        tmp = cur;
        axpy(tmp, -0.5 * h, k2);
        rhs_into(k3, tmp, t - 0.5 * h, p, ws);

        tmp = cur;
        axpy(tmp, -h, k3);
        rhs_into(k4, tmp, t - h, p, ws);

        DenseTensor& next = sol.psi[k - 1];
        next = cur;
        axpy(next, -h / 6.0, k1);
        axpy(next, -h / 3.0, k2);
        axpy(next, -h / 3.0, k3);
        axpy(next, -h / 6.0, k4);

        if (next.max_abs() > kRiccatiOverflowGuard) throw RiccatiBlowup(t - h);
    }
    rhs_into(sol.dpsi[0], sol.psi[0], 0.0, p, ws);
    return sol;
}

void RiccatiSolution::interpolate(double t, DenseTensor& out) const {
    t = std::clamp(t, times.front(), times.back());
    std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, t / dt)),
                             times.size() - 2);
    double s = (t - times[i]) / dt;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const auto& p0 = psi[i].v;
    const auto& p1 = psi[i + 1].v;
    const auto& d0 = dpsi[i].v;
    const auto& d1 = dpsi[i + 1].v;
    out.dim = 3;
    out.trunc = trunc;
    out.v.resize(p0.size());
    for (std::size_t w = 0; w < p0.size(); ++w)
        out.v[w] = h00 * p0[w] + dt * h10 * d0[w] + h01 * p1[w] + dt * h11 * d1[w];
}

double no_permanent_gain(double t, const MarketParams& m) {
    const double c = std::sqrt(0.5 * m.lambda * m.sigma * m.sigma * m.eta);
    return c * std::tanh(c * (m.T - t) / m.eta);
}

double no_permanent_kernel(double t, double s, const MarketParams& m) {
    const double c = std::sqrt(0.5 * m.lambda * m.sigma * m.sigma * m.eta);
    return (c / m.eta) * std::cosh(c * (m.T - s) / m.eta) /
           std::sinh(c * (m.T - t) / m.eta);
}

namespace {

TensorSeries xi2_projected(const SignaturePayoff& payoff, const MarketParams& m,
                           double s, double t) {
    // (xi_s |> 2) |_{E_{s-t}} in d = 2.
    s = std::clamp(s, 0.0, payoff.maturity);  // quadrature round-off
    TensorSeries xi2 = proj_word(xi_at(payoff, s, m.sigma), word_from_string(2, "2"));
    return proj_series(xi2,
                       expected_signature_bachelier(std::max(0.0, s - t), m.sigma,
                                                    xi2.trunc));
}

}  // namespace

TensorSeries xi_hat_no_permanent(const SignaturePayoff& payoff, const MarketParams& m,
                                 double t, int n_quad) {
    const double T = m.T;
    if (t >= T)
        return proj_word(xi_at(payoff, T, m.sigma), word_from_string(2, "2"));
    int intervals = std::max(2, static_cast<int>(std::ceil((T - t) / (T / n_quad))));
    const double hs = (T - t) / intervals;
    const int trunc = std::max(1, payoff.xi.degree());
    TensorSeries acc(2, trunc);
    // Composite Simpson with midpoints: int_a^b F = (b-a)/6 (F_a + 4 F_mid + F_b).
    for (int j = 0; j < intervals; ++j) {
        double a = t + j * hs, b = a + hs, mid = 0.5 * (a + b);
        TensorSeries fa = scale(xi2_projected(payoff, m, a, t),
                                no_permanent_kernel(t, a, m));
        TensorSeries fm = scale(xi2_projected(payoff, m, mid, t),
                                4.0 * no_permanent_kernel(t, mid, m));
        TensorSeries fb = scale(xi2_projected(payoff, m, b, t),
                                no_permanent_kernel(t, b, m));
        acc = add(acc, scale(add(add(fa, fm), fb), hs / 6.0));
    }
    return acc;
}

RiccatiSolution closed_form_no_permanent(const RiccatiParams& p, int n_nodes,
                                         int n_quad) {
    const MarketParams& m = p.market;
    if (m.nu != 0.0 || m.mu != 0.0)
        throw std::invalid_argument("closed_form_no_permanent: requires nu = 0, mu = 0");
    const int trunc = p.effective_trunc();
    const double T = m.T;

    RiccatiSolution sol;
    sol.market = m;
    sol.trunc = trunc;
    sol.dt = T / n_nodes;
    sol.times.resize(n_nodes + 1);
    sol.psi.assign(n_nodes + 1, DenseTensor(3, trunc));
    sol.dpsi.assign(n_nodes + 1, DenseTensor(3, trunc));

    const WordIndex w2 = word_from_string(2, "2");
    auto lift = [&](const TensorSeries& a) { return lift_2_to_3(a); };

    for (int k = 0; k <= n_nodes; ++k) {
        const double t = k * sol.dt;
        sol.times[k] = t;
        if (k == n_nodes) continue;  // psi(T) = 0

        // f(t) [3 + e X0 - xi_hat]^sh2
        TensorSeries xhat = xi_hat_no_permanent(p.payoff, m, t, n_quad);
        TensorSeries Bhat(3, trunc);
        Bhat.coeffs.emplace_back(word_from_string(3, "3"), 1.0);
        Bhat.normalize();
        Bhat = add(Bhat, monomial(3, trunc, kEmptyWord, m.X0));
        Bhat = sub(Bhat, lift(xhat));
        TensorSeries psi_t = scale(shuffle(Bhat, Bhat, trunc), no_permanent_gain(t, m));

        // + (lambda sigma^2 / 2) int (xi~ - xi^)^sh2 |_E
        // + sigma^2 int f(s) (xi^ |> 2)^sh2 |_E        (both d = 2)
        int intervals = std::max(2, static_cast<int>(std::ceil((T - t) / (T / n_quad))));
        double hs = (T - t) / intervals;
        TensorSeries acc(2, trunc);
        auto integrand = [&](double s) {
            s = std::clamp(s, 0.0, T);
            TensorSeries xh = xi_hat_no_permanent(p.payoff, m, s, n_quad);
            TensorSeries xt =
                proj_word(xi_at(p.payoff, s, m.sigma), w2);
            TensorSeries d = sub(xt, xh);
            TensorSeries val =
                scale(shuffle(d, d, trunc), 0.5 * m.lambda * m.sigma * m.sigma);
            TensorSeries xh2 = proj_word(xh, w2);
            val = add(val, scale(shuffle(xh2, xh2, trunc),
                                 m.sigma * m.sigma * no_permanent_gain(s, m)));
            return proj_series(val, expected_signature_bachelier(s - t, m.sigma, trunc));
        };
        for (int j = 0; j < intervals; ++j) {
            double a = t + j * hs, b = a + hs, mid = 0.5 * (a + b);
            TensorSeries block =
                add(add(integrand(a), scale(integrand(mid), 4.0)), integrand(b));
            acc = add(acc, scale(block, hs / 6.0));
        }
        psi_t = add(psi_t, lift(acc));
        sol.psi[k] = DenseTensor::from_series(psi_t, trunc);
    }

    // Derivatives via the Riccati right-hand side the closed form satisfies.
    RiccatiParams rp = p;
    rp.trunc = trunc;
    RhsWorkspace ws(trunc);
    for (int k = 0; k <= n_nodes; ++k)
        rhs_into(sol.dpsi[k], sol.psi[k], sol.times[k], rp, ws);
    return sol;
}

namespace {

void check_eu_quadratic(const MarketParams& m, double gamma) {
    const double c = std::sqrt(2.0 * m.eta * m.lambda) * m.sigma;
    if (m.mu != 0.0)
        throw std::invalid_argument("closed_form_eu_quadratic: requires mu = 0");
    if (!(m.nu < c))
        throw std::invalid_argument(
            "closed_form_eu_quadratic: requires nu < sqrt(2 eta lambda sigma^2)");
    if (!(std::fabs(m.nu * gamma) < 1.0))
        throw std::invalid_argument("closed_form_eu_quadratic: requires |nu Gamma| < 1");
}

}  // namespace

double eu_quadratic_gain(double t, const MarketParams& m, double gamma) {
    check_eu_quadratic(m, gamma);
    const double c = std::sqrt(2.0 * m.eta * m.lambda) * m.sigma;
    const double g = 1.0 - m.nu * gamma;
    const double shift = 0.5 * std::log((c + m.nu) / (c - m.nu));
    return (m.nu + c * std::tanh(c * g / (2.0 * m.eta) * (m.T - t) - shift)) /
           (2.0 * g);
}

double eu_quadratic_speed(double t, const MarketParams& m, double gamma,
                          double inventory_minus_target) {
    const double f = eu_quadratic_gain(t, m, gamma);
    return (m.nu - 2.0 * f * (1.0 - m.nu * gamma)) / (2.0 * m.eta) *
           inventory_minus_target;
}

RiccatiSolution closed_form_eu_quadratic(const RiccatiParams& p, double gamma,
                                         int n_nodes) {
    const MarketParams& m = p.market;
    check_eu_quadratic(m, gamma);
    const int trunc = std::max(2, p.effective_trunc());
    const double T = m.T;
    const double c = std::sqrt(2.0 * m.eta * m.lambda) * m.sigma;
    const double g = 1.0 - m.nu * gamma;
    const double a = c * g / (2.0 * m.eta);
    const double shift = 0.5 * std::log((c + m.nu) / (c - m.nu));

    // int_t^T f(s) ds analytically: int tanh = log cosh.
    auto integral_f = [&](double t0) {
        double argt = a * (T - t0) - shift;
        double argT = -shift;
        return (m.nu * (T - t0) +
                (c / a) * (std::log(std::cosh(argt)) - std::log(std::cosh(argT)))) /
               (2.0 * g);
    };

    // xi~ = Gamma 2 lifted; constant in t.
    TensorSeries B(3, trunc);
    B.coeffs.emplace_back(word_from_string(3, "3"), 1.0);
    B.coeffs.emplace_back(word_from_string(3, "2"), -gamma);
    B.normalize();
    B = add(B, monomial(3, trunc, kEmptyWord, m.X0));
    TensorSeries Bsq = shuffle(B, B, trunc);

    RiccatiSolution sol;
    sol.market = m;
    sol.trunc = trunc;
    sol.dt = T / n_nodes;
    sol.times.resize(n_nodes + 1);
    sol.psi.assign(n_nodes + 1, DenseTensor(3, trunc));
    sol.dpsi.assign(n_nodes + 1, DenseTensor(3, trunc));
    for (int k = 0; k <= n_nodes; ++k) {
        const double t = k * sol.dt;
        sol.times[k] = t;
        double f = eu_quadratic_gain(t, m, gamma);
        TensorSeries psi_t = scale(Bsq, f);
        psi_t = add(psi_t, monomial(3, trunc, kEmptyWord,
                                    m.sigma * m.sigma * gamma * gamma * integral_f(t)));
        sol.psi[k] = DenseTensor::from_series(psi_t, trunc);
        // f-dot from the scalar Riccati equation f' = (nu - 2f g)^2/(4 eta) - lambda sigma^2/2.
        double fdot = (m.nu - 2.0 * f * g) * (m.nu - 2.0 * f * g) / (4.0 * m.eta) -
                      0.5 * m.lambda * m.sigma * m.sigma;
        DenseTensor d = DenseTensor::from_series(scale(Bsq, fdot), trunc);
        d.v[0] -= m.sigma * m.sigma * gamma * gamma * f;
        sol.dpsi[k] = std::move(d);
    }
    return sol;
}

}  // namespace sighedge
