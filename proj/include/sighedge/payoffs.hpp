#ifndef SIGHEDGE_PAYOFFS_HPP
#define SIGHEDGE_PAYOFFS_HPP

#include <span>
#include <string>

#include "sighedge/signature.hpp"
#include "sighedge/tensor_series.hpp"

namespace sighedge {

// Payoff written on the signature of the time-augmented price:
// H_T = <xi, sig of (t, price)>, xi in T(R^2).
struct SignaturePayoff {
    TensorSeries xi;    // d = 2
    double maturity = 0.0;
    double nominal = 1.0;  // informational; xi already carries the scale
    std::string description;
};

// European polynomial payoff sum_k alpha_k (S_T - K)^k, represented as
// xi = N sum_k alpha_k (2 + e (S0 - K))^{shuffle k}.
SignaturePayoff european_poly(std::span<const double> alpha, double K, double S0,
                              double nominal, double T);

// Asian polynomial payoff sum_k alpha_k ((1/T) int S dt - K)^k, with
// xi = N sum_k alpha_k ((1/T) 21 + e (S0 - K))^{shuffle k}.
SignaturePayoff asian_poly(std::span<const double> alpha, double K, double S0,
                           double nominal, double T);

// xi_t = xi |_{E_{T-t}}; xi_T = xi.
TensorSeries xi_at(const SignaturePayoff& payoff, double t, double sigma);

// Max-norm of the central-difference check of the xi_t evolution
//   (xi_{t+h} - xi_{t-h}) / (2h) + xi_t |> 1 + (sigma^2/2) xi_t |> 22.
// The difference xi_{t+h} - xi_{t-h} is evaluated through the projection
// of xi against E_{-h} - E_{h}, which is the same quantity with the exact
// cancellation done before rounding.
double xi_ode_residual(const SignaturePayoff& payoff, double t, double sigma,
                       double h);

enum class PayoffKind {
    EuropeanCall,
    AsianCall,
    OneTouchMax,
    LookbackFloatCall,
    EuropeanQuadratic,
    AsianQuadratic,
};

const char* payoff_kind_name(PayoffKind kind);

// Path-dependent payoff evaluated directly on the sampled price path.
struct PathPayoff {
    PayoffKind kind = PayoffKind::EuropeanCall;
    double strike = 0.0;    // K (calls, quadratics)
    double barrier = 0.0;   // H (one-touch)
    double nominal = 1.0;
};

// Evaluates on a (t, P) path: Asian integrals use the trapezoidal rule on
// the grid; max/min are taken over grid points.
double evaluate_path_payoff(const PathPayoff& p, const SampledPath& path);

// Exact signature representation when one exists (quadratics); throws for
// the four non-signature payoffs.
SignaturePayoff exact_signature_payoff(const PathPayoff& p, double S0, double T);

// Payoff from running path statistics (terminal value, trapezoidal
// integral, extremes); shared by the simulator and the regression harness.
double payoff_from_stats(const PathPayoff& p, double T, double terminal,
                         double integral, double max_v, double min_v);

// Bachelier closed forms used by delta-tracking benchmarks and tests.
double norm_pdf(double x);
double norm_cdf(double x);
double bachelier_call_price(double P, double K, double sigma, double tau);
double bachelier_call_delta(double P, double K, double sigma, double tau);
// Asian call on the arithmetic average over [0, T]; I = int_0^t P ds.
double bachelier_asian_call_price(double t, double P, double I, double K,
                                  double sigma, double T);
double bachelier_asian_call_delta(double t, double P, double I, double K,
                                  double sigma, double T);

}  // namespace sighedge

#endif
