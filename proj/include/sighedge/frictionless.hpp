#ifndef SIGHEDGE_FRICTIONLESS_HPP
#define SIGHEDGE_FRICTIONLESS_HPP

#include <cstdint>
#include <vector>

#include "sighedge/payoffs.hpp"
#include "sighedge/signature.hpp"

namespace sighedge {

// Perfect replication of a signature payoff without frictions:
// initial wealth xi_0^empty and hedge X_t = <xi_t |> 2, sig of (t,S)>.
struct HedgePlan {
    SignaturePayoff payoff;
    double sigma = 0.0;
    double mu = 0.0;
    double initial_wealth = 0.0;
};

HedgePlan make_hedge_plan(const SignaturePayoff& payoff, double sigma, double mu);

// Fair (Bachelier) price <xi, E_T>.
double fair_price(const SignaturePayoff& payoff, double sigma);

// Hedge ratio at time t given the running signature of (t, S).
double hedge_ratio(const SignaturePayoff& payoff, double t, double sigma,
                   const SignatureState& state);

struct ReplicationStats {
    int n_steps = 0;
    int n_paths = 0;
    double rms_error = 0.0;     // terminal V_T - H_T
    double max_error = 0.0;
    double mean_error = 0.0;
    std::vector<double> per_path_error;
};

// Simulates discrete rebalancing on a uniform grid under
// dS = mu dt + sigma dW and reports the terminal replication error.
ReplicationStats simulate_replication(const SignaturePayoff& payoff, double sigma,
                                      double mu, double S0, int n_steps, int n_paths,
                                      std::uint64_t seed);

}  // namespace sighedge

#endif
