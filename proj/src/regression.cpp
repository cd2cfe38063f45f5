#include "sighedge/regression.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sighedge/rng.hpp"
#include "sighedge/signature.hpp"

namespace sighedge {

namespace {
constexpr std::uint64_t kTrainBridgeMax = 0x747261696e5f6d78ULL;
constexpr std::uint64_t kTrainBridgeMin = 0x747261696e5f6d6eULL;
}  // namespace

void RegressionSpec::validate() const {
    if (M < 0) throw std::invalid_argument("regression: M must be >= 0");
    if (J < 1) throw std::invalid_argument("regression: J must be >= 1");
    if (L < n_features())
        throw std::invalid_argument("regression: need at least as many paths as features");
    if (!(T > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("regression: invalid driver parameters");
}

void build_design(const RegressionSpec& spec, Eigen::MatrixXd& features,
                  Eigen::VectorXd& targets) {
    spec.validate();
    const int n_cols = spec.n_features();
    features.resize(spec.L, n_cols);
    targets.resize(spec.L);
    const double dt = spec.T / spec.J;
    const double sdt = std::sqrt(dt);
    const double var = spec.sigma * spec.sigma * dt;
    const bool bmax = spec.bridge_extremes && spec.payoff.kind == PayoffKind::OneTouchMax;
    const bool bmin =
        spec.bridge_extremes && spec.payoff.kind == PayoffKind::LookbackFloatCall;

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        ChenWorkspace ws(2, spec.M);
        DenseTensor sig(2, spec.M);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int l = 0; l < spec.L; ++l) {
            auto rng = path_rng(spec.seed, static_cast<std::uint64_t>(l));
            std::normal_distribution<double> gauss(0.0, 1.0);
            sig.set_zero();
            sig.v[0] = 1.0;
            double S = spec.S0, integral = 0.0, mx = S, mn = S;
            for (int k = 0; k < spec.J; ++k) {
                double dS = spec.mu * dt + spec.sigma * sdt * gauss(rng);
                double Snew = S + dS;
                integral += 0.5 * (S + Snew) * dt;
                if (bmax) {
                    double u = counter_uniform(spec.seed, l, k, kTrainBridgeMax);
                    double d = Snew - S;
                    mx = std::max(mx, 0.5 * (S + Snew +
                                             std::sqrt(d * d - 2.0 * var * std::log(u))));
                } else {
                    mx = std::max(mx, Snew);
                }
                if (bmin) {
                    double u = counter_uniform(spec.seed, l, k, kTrainBridgeMin);
                    double d = Snew - S;
                    mn = std::min(mn, 0.5 * (S + Snew -
                                             std::sqrt(d * d - 2.0 * var * std::log(u))));
                } else {
                    mn = std::min(mn, Snew);
                }
                double dx[2] = {dt, dS};
                chen_advance(sig, dx, ws);
                S = Snew;
            }
            for (int c = 0; c < n_cols; ++c) features(l, c) = sig.v[c];
            targets(l) = payoff_from_stats(spec.payoff, spec.T, S, integral, mx, mn);
        }
    }
}

RegressionResult fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                     const RegressionSpec& spec) {
    const int n_cols = static_cast<int>(features.cols());
    const int n_rows = static_cast<int>(features.rows());
    if (n_rows < n_cols)
        throw std::invalid_argument("regression fit: fewer rows than columns");
    const int n_train = std::max(n_cols, static_cast<int>(n_rows * 0.8));

    Eigen::MatrixXd A = features.topRows(n_train);
    Eigen::VectorXd y = targets.head(n_train);
    if (spec.ridge > 0.0) {
        A.conservativeResize(n_train + n_cols, Eigen::NoChange);
        A.bottomRows(n_cols) =
            std::sqrt(spec.ridge) * Eigen::MatrixXd::Identity(n_cols, n_cols);
        y.conservativeResize(n_train + n_cols);
        y.tail(n_cols).setZero();
    }

    // The time-augmented terminal signature satisfies exact linear
    // relations ((1 - T e) shuffle u vanishes on every path), so the design
    // has generic rank 2^M out of 2^{M+1}-1 columns.  Solve by minimum-norm
    // SVD least squares and only treat ranks below the generic one as a
    // degenerate design.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    RegressionResult res;
    res.rank = static_cast<int>(svd.rank());
    const int expected_rank = static_cast<int>(word_space_size(2, spec.M)) -
                              (spec.M >= 1
                                   ? static_cast<int>(word_space_size(2, spec.M - 1))
                                   : 0);
    if (res.rank < expected_rank) throw RankDeficient(res.rank, n_cols);
    const auto& sv = svd.singularValues();
    res.cond = sv(0) / sv(res.rank - 1);
    Eigen::VectorXd beta = svd.solve(y);

    res.ell = TensorSeries(2, spec.M);
    for (int c = 0; c < n_cols; ++c)
        if (beta(c) != 0.0)
            res.ell.coeffs.emplace_back(static_cast<WordIndex>(c), beta(c));
    res.ell.normalize();

    auto mse = [&](int begin, int end) {
        if (end <= begin) return 0.0;
        double s = 0.0;
        for (int r = begin; r < end; ++r) {
            double e = targets(r) - features.row(r).head(n_cols).dot(beta);
            s += e * e;
        }
        return s / (end - begin);
    };
    res.mse_in = mse(0, n_train);
    res.mse_out = mse(n_train, n_rows);
    return res;
}

std::pair<RegressionResult, RiccatiSolution> regress_and_hedge(
    const RegressionSpec& spec, const MarketParams& market, int n_ode) {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    build_design(spec, X, y);
    RegressionResult reg = fit(X, y, spec);

    SignaturePayoff proxy;
    proxy.xi = reg.ell;
    proxy.xi.trunc = std::max(1, reg.ell.degree());
    proxy.maturity = spec.T;
    proxy.nominal = spec.payoff.nominal;
    proxy.description =
        std::string("regressed ") + payoff_kind_name(spec.payoff.kind);

    RiccatiParams rp;
    rp.market = market;
    rp.payoff = proxy;
    rp.trunc = 2 * std::max(1, spec.M - 1);
    rp.n_ode = n_ode;
    RiccatiSolution sol = solve_backward(rp);
    return {std::move(reg), std::move(sol)};
}

}  // namespace sighedge
