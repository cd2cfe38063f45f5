#ifndef SIGHEDGE_MARKET_HPP
#define SIGHEDGE_MARKET_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sighedge/market_params.hpp"
#include "sighedge/payoffs.hpp"
#include "sighedge/riccati.hpp"

namespace sighedge {

// Instrument being hedged: the signature tensor drives the marks and the
// feedback; when the payoff is not an exact signature payoff, `exact`
// supplies the true terminal functional and `sig` holds the regressed
// proxy.
struct HedgeInstrument {
    SignaturePayoff sig;
    std::optional<PathPayoff> exact;
};

enum class StrategyKind {
    SigFeedback,            // Riccati feedback with permanent impact
    NoPermanentBenchmark,   // nu = 0 closed-form tracker of xi_hat
    DeltaTracking,          // tracks a closed-form Bachelier delta
    ZeroTrading,
};

struct StrategySpec {
    StrategyKind kind = StrategyKind::ZeroTrading;
    std::string label;
    const RiccatiSolution* riccati = nullptr;  // required for SigFeedback
    int xi_hat_quad = 200;                     // benchmark quadrature refinement
};

struct SimOptions {
    int n_paths = 10000;
    int n_steps = 500;
    std::uint64_t seed = 1;
    // Brownian-bridge sampling of the segment extremes for one-touch and
    // look-back payoffs; removes the discrete-monitoring bias.
    bool bridge_extremes = true;
    int n_threads = 0;       // 0 = library default
    int store_paths = 0;     // trajectory dump count
};

struct StrategyStats {
    std::string label;
    double mean_RT = 0.0, se_RT = 0.0;
    double mean_qv = 0.0;
    double mqv = 0.0, se_mqv = 0.0;
    double mean_payoff = 0.0, se_payoff = 0.0;
    std::vector<double> RT, qv, payoff;  // per path
};

// Row (t, S, P, X, theta, R) per grid node.
using TrajectoryRow = std::array<double, 6>;

struct SimResult {
    MarketParams market;
    std::uint64_t seed = 0;
    int n_paths = 0, n_steps = 0;
    std::vector<StrategyStats> strategies;
    // trajectories[strategy][stored path][node]
    std::vector<std::vector<std::vector<TrajectoryRow>>> trajectories;
};

// One Euler step of the impacted market (exposed for tests):
// S += mu dt + sigma dW, X += theta dt, P = S + nu (X - X0); the
// execution price P + eta theta accrues cost, and the (t,P,X) signature
// advances by one Chen step.
struct MarketState {
    double t = 0.0, S = 0.0, P = 0.0, X = 0.0, cost = 0.0;
};
MarketState step_market(const MarketState& state, double theta, double dW, double dt,
                        const MarketParams& m);

// theta* = 1/(2 eta) [ nu (X - <xi_t|>2, P-sig>) - <nu psi|>2 + psi|>3, Z-sig> ].
double feedback_speed(const RiccatiSolution& sol, const SignaturePayoff& payoff,
                      const MarketParams& m, double t, double X,
                      const DenseTensor& sig3);

// theta = f(t)/eta (Delta_target - X) with the Prop-5.4 gain f.
// I = int_0^t P ds (needed by Asian targets). Throws for kinds without a
// closed-form Bachelier delta.
double delta_tracking_speed(const MarketParams& m, const PathPayoff& target,
                            double t, double P, double I, double X);

// Euler simulation of all strategies on common Brownian draws.
SimResult run_paths(const MarketParams& m, const HedgeInstrument& instrument,
                    std::span<const StrategySpec> strategies, const SimOptions& opt);

// pi = xi_0^empty + psi_0^empty, from the Riccati solution alone.
double indifference_price_riccati(const SignaturePayoff& payoff, const MarketParams& m,
                                  int trunc = 0, int n_ode = 2000);

struct McPrice {
    double price = 0.0;
    double std_error = 0.0;
};

// Approximate indifference price: R_T is affine in V0 with slope one, so a
// single V0 = 0 run gives pi~ = -MQV.
McPrice indifference_price_mc(const HedgeInstrument& instrument, MarketParams m,
                              const RiccatiSolution& sol, const SimOptions& opt);

// (xi_0 |> 2)^empty, the Bachelier delta at inception of a signature payoff.
double default_initial_inventory(const SignaturePayoff& payoff, double sigma);

}  // namespace sighedge

#endif
