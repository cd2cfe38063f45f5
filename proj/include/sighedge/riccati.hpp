#ifndef SIGHEDGE_RICCATI_HPP
#define SIGHEDGE_RICCATI_HPP

#include <stdexcept>
#include <vector>

#include "sighedge/dense_tensor.hpp"
#include "sighedge/market_params.hpp"
#include "sighedge/payoffs.hpp"

namespace sighedge {

// Per-coefficient guard for the backward integration; the system has no
// global existence theory, so divergence is reported instead of silently
// producing garbage.
inline constexpr double kRiccatiOverflowGuard = 1e12;

struct RiccatiBlowup : std::runtime_error {
    double t;
    explicit RiccatiBlowup(double time)
        : std::runtime_error("riccati: coefficient overflow during backward solve"),
          t(time) {}
};

struct RiccatiParams {
    MarketParams market;
    SignaturePayoff payoff;   // d = 2 tensor xi
    int trunc = 0;            // psi truncation order (2 M~); 0 = derive default
    int n_ode = 2000;

    // Default truncation 2 max(1, deg xi - 1), the projected-shuffle order.
    int effective_trunc() const;
};

// Backward Riccati trajectory psi(t) on T^trunc(R^3) with nodes on a
// uniform grid; cubic Hermite interpolation between nodes using the
// stored right-hand sides.
struct RiccatiSolution {
    MarketParams market;
    int trunc = 0;
    double dt = 0.0;
    std::vector<double> times;        // ascending, times[0] = 0
    std::vector<DenseTensor> psi;     // per node
    std::vector<DenseTensor> dpsi;    // psi-dot per node

    double psi0_empty() const { return psi.front().v[0]; }
    void interpolate(double t, DenseTensor& out) const;
};

// psi-dot = -psi|>1 - (sigma^2/2) psi|>22 - (lambda sigma^2/2) B^sh2
//           + 1/(4 eta) (nu B - (nu psi|>2 + psi|>3))^sh2
//           + mu (B - psi|>2),
// with B = 3 + e X0 - lifted(xi_t |> 2) and every shuffle projected onto
// words of length <= trunc.
TensorSeries riccati_rhs(const TensorSeries& psi, double t, const RiccatiParams& p);

// Classical RK4 from psi(T) = 0 with fixed step T/n_ode.
RiccatiSolution solve_backward(const RiccatiParams& p);

// Prop-style closed form without permanent impact (nu = 0, mu = 0):
// tracking gain f(t) = c tanh(c(T-t)/eta), c = sqrt(lambda sigma^2 eta / 2),
// kernel K(t,s) and the smoothed hedge target xi_hat.
double no_permanent_gain(double t, const MarketParams& m);
double no_permanent_kernel(double t, double s, const MarketParams& m);

// xi_hat_t = int_t^T K(t,s) (xi_s|>2)|_{E_{s-t}} ds as a d=2 series,
// composite Simpson with subintervals of length about m.T/n_quad.
TensorSeries xi_hat_no_permanent(const SignaturePayoff& payoff, const MarketParams& m,
                                 double t, int n_quad);

// Full psi trajectory of the nu = 0 closed form, evaluated on n_nodes+1
// uniform nodes; oracle for solve_backward.
RiccatiSolution closed_form_no_permanent(const RiccatiParams& p, int n_nodes,
                                         int n_quad);

// European quadratic payoff xi = Gamma 22 (Prop-style closed form with
// permanent impact).  Requires mu = 0, nu < sqrt(2 eta lambda sigma^2),
// |nu Gamma| < 1.
double eu_quadratic_gain(double t, const MarketParams& m, double gamma);
// Optimal speed theta = (nu - 2 f(t)(1 - nu Gamma))/(2 eta) (X - <xi_t|>2, P>).
double eu_quadratic_speed(double t, const MarketParams& m, double gamma,
                          double inventory_minus_target);
RiccatiSolution closed_form_eu_quadratic(const RiccatiParams& p, double gamma,
                                         int n_nodes);

}  // namespace sighedge

#endif
