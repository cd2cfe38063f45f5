#ifndef SIGHEDGE_REGRESSION_HPP
#define SIGHEDGE_REGRESSION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "sighedge/market_params.hpp"
#include "sighedge/payoffs.hpp"
#include "sighedge/riccati.hpp"

namespace sighedge {

struct RankDeficient : std::runtime_error {
    int rank;
    int cols;
    RankDeficient(int r, int c)
        : std::runtime_error("regression: rank-deficient design (rank " +
                             std::to_string(r) + " of " + std::to_string(c) + ")"),
          rank(r),
          cols(c) {}
};

// Learning setup of the payoff regression: L unimpacted Bachelier paths on
// a J-step grid, signature features up to order M.
struct RegressionSpec {
    PathPayoff payoff;
    int M = 5;
    int L = 100000;
    int J = 500;
    std::uint64_t seed = 7;
    double mu = 0.0;
    double sigma = 2.0;
    double S0 = 10.0;
    double T = 0.2;
    bool bridge_extremes = true;
    double ridge = 0.0;

    int n_features() const { return static_cast<int>(word_space_size(2, M)); }
    void validate() const;
};

struct RegressionResult {
    TensorSeries ell;     // d = 2, degree <= M
    double mse_in = 0.0;
    double mse_out = 0.0;
    int rank = 0;
    double cond = 0.0;    // |R11/Rnn| of the pivoted QR factor
};

// Feature matrix (row l = signature entries of path l in canonical word
// order) and targets H_T^(l).
void build_design(const RegressionSpec& spec, Eigen::MatrixXd& features,
                  Eigen::VectorXd& targets);

// Least squares by column-pivoted Householder QR on the first 80% of the
// rows; the held-out 20% gives the out-of-sample MSE.
RegressionResult fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                     const RegressionSpec& spec);

// Full pipeline: regress, wrap ell as a signature payoff, solve the
// Riccati system at truncation 2 (M - 1).
std::pair<RegressionResult, RiccatiSolution> regress_and_hedge(
    const RegressionSpec& spec, const MarketParams& market, int n_ode);

}  // namespace sighedge

#endif
