#include "sighedge/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sighedge {

namespace {

SignaturePayoff poly_payoff(const TensorSeries& base, std::span<const double> alpha,
                            double nominal, double T, std::string desc) {
    int deg = 0;
    for (std::size_t k = 0; k < alpha.size(); ++k)
        if (alpha[k] != 0.0) deg = static_cast<int>(k);
    int trunc = std::max(1, deg * base.degree());
    TensorSeries xi(2, trunc);
    TensorSeries pw = unit(2, trunc);
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (k > 0) pw = shuffle(pw, base, trunc);
        if (alpha[k] != 0.0) xi = add(xi, scale(pw, nominal * alpha[k]));
    }
    xi.trunc = std::max(1, xi.degree());
    SignaturePayoff p;
    p.xi = std::move(xi);
    p.maturity = T;
    p.nominal = nominal;
    p.description = std::move(desc);
    return p;
}

}  // namespace

SignaturePayoff european_poly(std::span<const double> alpha, double K, double S0,
                              double nominal, double T) {
    TensorSeries base(2, 1);
    if (S0 != K) base.coeffs.emplace_back(kEmptyWord, S0 - K);
    base.coeffs.emplace_back(word_from_string(2, "2"), 1.0);
    base.normalize();
    return poly_payoff(base, alpha, nominal, T, "european polynomial");
}

SignaturePayoff asian_poly(std::span<const double> alpha, double K, double S0,
                           double nominal, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("asian_poly: T must be positive");
    TensorSeries base(2, 2);
    if (S0 != K) base.coeffs.emplace_back(kEmptyWord, S0 - K);
    base.coeffs.emplace_back(word_from_string(2, "21"), 1.0 / T);
    base.normalize();
    return poly_payoff(base, alpha, nominal, T, "asian polynomial");
}

TensorSeries xi_at(const SignaturePayoff& payoff, double t, double sigma) {
    if (t < 0.0 || t > payoff.maturity)
        throw std::invalid_argument("xi_at: t outside [0, T]");
    TensorSeries e = expected_signature_bachelier(payoff.maturity - t, sigma,
                                                  payoff.xi.trunc);
    return proj_series(payoff.xi, e);
}

double xi_ode_residual(const SignaturePayoff& payoff, double t, double sigma,
                       double h) {
    if (!(h > 0.0) || t - h < 0.0 || t + h > payoff.maturity)
        throw std::invalid_argument("xi_ode_residual: need [t-h, t+h] in [0, T]");
    const int trunc = payoff.xi.trunc;
    const double tau = payoff.maturity - t;
    // E_{tau -+ h} = E_{-+h} (x) E_tau, so the central difference equals the
    // projection against (E_{-h} - E_{h})/(2h) followed by |_{E_tau}.
    TensorSeries gen(2, trunc);
    gen.coeffs.emplace_back(word_from_string(2, "1"), -h);
    gen.coeffs.emplace_back(word_from_string(2, "22"), -0.5 * sigma * sigma * h);
    gen.normalize();
    TensorSeries em = tensor_exp(gen, trunc);
    TensorSeries ep = expected_signature_bachelier(h, sigma, trunc);
    TensorSeries diff = scale(sub(em, ep), 1.0 / (2.0 * h));
    TensorSeries ddt = proj_series(proj_series(payoff.xi, diff),
                                   expected_signature_bachelier(tau, sigma, trunc));

    TensorSeries xt = xi_at(payoff, t, sigma);
    TensorSeries drift = add(proj_word(xt, word_from_string(2, "1")),
                             scale(proj_word(xt, word_from_string(2, "22")),
                                   0.5 * sigma * sigma));
    return add(ddt, drift).max_abs();
}

const char* payoff_kind_name(PayoffKind kind) {
    switch (kind) {
        case PayoffKind::EuropeanCall: return "european_call";
        case PayoffKind::AsianCall: return "asian_call";
        case PayoffKind::OneTouchMax: return "one_touch";
        case PayoffKind::LookbackFloatCall: return "lookback";
        case PayoffKind::EuropeanQuadratic: return "european_quadratic";
        case PayoffKind::AsianQuadratic: return "asian_quadratic";
    }
    return "unknown";
}

double evaluate_path_payoff(const PathPayoff& p, const SampledPath& path) {
    path.validate();
    const std::size_t n = path.n_points();
    const double T = path.times.back() - path.times.front();
    auto price = [&](std::size_t j) { return path.point(j)[path.dim - 1]; };
    switch (p.kind) {
        case PayoffKind::EuropeanCall:
            return p.nominal * std::max(0.0, price(n - 1) - p.strike);
        case PayoffKind::EuropeanQuadratic: {
            double d = price(n - 1) - p.strike;
            return p.nominal * d * d;
        }
        case PayoffKind::AsianCall:
        case PayoffKind::AsianQuadratic: {
            double integral = 0.0;
            for (std::size_t j = 1; j < n; ++j)
                integral += 0.5 * (price(j) + price(j - 1)) *
                            (path.times[j] - path.times[j - 1]);
            double d = integral / T - p.strike;
            return p.kind == PayoffKind::AsianCall
                       ? p.nominal * std::max(0.0, d)
                       : p.nominal * d * d;
        }
        case PayoffKind::OneTouchMax: {
            double mx = price(0);
            for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, price(j));
            return mx >= p.barrier ? p.nominal : 0.0;
        }
        case PayoffKind::LookbackFloatCall: {
            double mn = price(0);
            for (std::size_t j = 1; j < n; ++j) mn = std::min(mn, price(j));
            return p.nominal * (price(n - 1) - mn);
        }
    }
    throw std::logic_error("evaluate_path_payoff: unknown kind");
}

SignaturePayoff exact_signature_payoff(const PathPayoff& p, double S0, double T) {
    const double alpha[3] = {0.0, 0.0, 1.0};
    switch (p.kind) {
        case PayoffKind::EuropeanQuadratic: {
            auto sp = european_poly(alpha, p.strike, S0, p.nominal, T);
            sp.description = "european quadratic";
            return sp;
        }
        case PayoffKind::AsianQuadratic: {
            auto sp = asian_poly(alpha, p.strike, S0, p.nominal, T);
            sp.description = "asian quadratic";
            return sp;
        }
        default:
            throw std::invalid_argument(
                std::string("no exact signature representation for ") +
                payoff_kind_name(p.kind));
    }
}

double payoff_from_stats(const PathPayoff& p, double T, double terminal,
                         double integral, double max_v, double min_v) {
    switch (p.kind) {
        case PayoffKind::EuropeanCall:
            return p.nominal * std::max(0.0, terminal - p.strike);
        case PayoffKind::EuropeanQuadratic: {
            double d = terminal - p.strike;
            return p.nominal * d * d;
        }
        case PayoffKind::AsianCall:
            return p.nominal * std::max(0.0, integral / T - p.strike);
        case PayoffKind::AsianQuadratic: {
            double d = integral / T - p.strike;
            return p.nominal * d * d;
        }
        case PayoffKind::OneTouchMax:
            return max_v >= p.barrier ? p.nominal : 0.0;
        case PayoffKind::LookbackFloatCall:
            return p.nominal * (terminal - min_v);
    }
    throw std::logic_error("payoff_from_stats: unknown kind");
}

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bachelier_call_price(double P, double K, double sigma, double tau) {
    if (tau <= 0.0) return std::max(0.0, P - K);
    double s = sigma * std::sqrt(tau);
    double d = (P - K) / s;
    return (P - K) * norm_cdf(d) + s * norm_pdf(d);
}

double bachelier_call_delta(double P, double K, double sigma, double tau) {
    if (tau <= 0.0) return P > K ? 1.0 : (P < K ? 0.0 : 0.5);
    return norm_cdf((P - K) / (sigma * std::sqrt(tau)));
}

// Conditional on time t, the arithmetic average (1/T) int_0^T P ds is
// Gaussian with mean (I + P (T-t))/T and std sigma sqrt((T-t)^3/3)/T.
double bachelier_asian_call_price(double t, double P, double I, double K,
                                  double sigma, double T) {
    double tau = T - t;
    double m = (I + P * tau) / T;
    if (tau <= 0.0) return std::max(0.0, m - K);
    double s = sigma * std::sqrt(tau * tau * tau / 3.0) / T;
    double d = (m - K) / s;
    return (m - K) * norm_cdf(d) + s * norm_pdf(d);
}

double bachelier_asian_call_delta(double t, double P, double I, double K,
                                  double sigma, double T) {
    double tau = T - t;
    double m = (I + P * tau) / T;
    if (tau <= 0.0) return 0.0;
    double s = sigma * std::sqrt(tau * tau * tau / 3.0) / T;
    return (tau / T) * norm_cdf((m - K) / s);
}

}  // namespace sighedge
