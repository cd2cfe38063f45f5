#include "sighedge/frictionless.hpp"

#include <cmath>
#include <stdexcept>

#include "sighedge/rng.hpp"

namespace sighedge {

double fair_price(const SignaturePayoff& payoff, double sigma) {
    return bracket(payoff.xi,
                   expected_signature_bachelier(payoff.maturity, sigma, payoff.xi.trunc));
}

HedgePlan make_hedge_plan(const SignaturePayoff& payoff, double sigma, double mu) {
    HedgePlan plan;
    plan.payoff = payoff;
    plan.sigma = sigma;
    plan.mu = mu;
    plan.initial_wealth = fair_price(payoff, sigma);
    return plan;
}

double hedge_ratio(const SignaturePayoff& payoff, double t, double sigma,
                   const SignatureState& state) {
    TensorSeries target = proj_word(xi_at(payoff, t, sigma), word_from_string(2, "2"));
    double s = 0.0;
    for (const auto& [w, c] : target.coeffs) s += c * state.sig.v[w];
    return s;
}

ReplicationStats simulate_replication(const SignaturePayoff& payoff, double sigma,
                                      double mu, double S0, int n_steps, int n_paths,
                                      std::uint64_t seed) {
    const double T = payoff.maturity;
    const double dt = T / n_steps;
    const double sdt = std::sqrt(dt);
    const int trunc = payoff.xi.trunc;
    const double V0 = fair_price(payoff, sigma);
    const WordIndex w2 = word_from_string(2, "2");

    // Hedge tensors per grid node, shared across paths.
    std::vector<TensorSeries> hedge(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k)
        hedge[k] = proj_word(xi_at(payoff, k * dt, sigma), w2);

    ReplicationStats stats;
    stats.n_steps = n_steps;
    stats.n_paths = n_paths;
    stats.per_path_error.resize(n_paths);

    ChenWorkspace ws(2, trunc);
    DenseTensor sig(2, trunc);
    double sum = 0.0, sum2 = 0.0, mx = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        auto rng = path_rng(seed, static_cast<std::uint64_t>(p));
        std::normal_distribution<double> gauss(0.0, 1.0);
        sig.set_zero();
        sig.v[0] = 1.0;
        double S = S0, V = V0;
        for (int k = 0; k < n_steps; ++k) {
            double X = 0.0;
            for (const auto& [w, c] : hedge[k].coeffs) X += c * sig.v[w];
            double dS = mu * dt + sigma * sdt * gauss(rng);
            V += X * dS;
            S += dS;
            double dx[2] = {dt, dS};
            chen_advance(sig, dx, ws);
        }
        double H = 0.0;
        for (const auto& [w, c] : payoff.xi.coeffs) H += c * sig.v[w];
        double err = V - H;
        stats.per_path_error[p] = err;
        sum += err;
        sum2 += err * err;
        mx = std::max(mx, std::fabs(err));
    }
    stats.mean_error = sum / n_paths;
    stats.rms_error = std::sqrt(sum2 / n_paths);
    stats.max_error = mx;
    return stats;
}

}  // namespace sighedge
