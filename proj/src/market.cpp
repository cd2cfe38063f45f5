#include "sighedge/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sighedge/rng.hpp"
#include "sighedge/signature.hpp"

namespace sighedge {

namespace {

constexpr std::uint64_t kBridgeTagMax = 0x6d61785f62726964ULL;
constexpr std::uint64_t kBridgeTagMin = 0x6d696e5f62726964ULL;

// Sparse tensor with word indices re-packed for d = 3 lookups against a
// dense signature array.
struct LiftedSparse {
    std::vector<std::pair<WordIndex, double>> terms;
    double dot(const DenseTensor& sig) const {
        double s = 0.0;
        for (const auto& [w, c] : terms) s += c * sig.v[w];
        return s;
    }
};

LiftedSparse lift_sparse(const TensorSeries& a) {
    LiftedSparse out;
    std::vector<std::uint8_t> digits;
    if (a.dim == 3) {
        for (const auto& [w, c] : a.coeffs) out.terms.emplace_back(w, c);
        return out;
    }
    for (const auto& [w, c] : a.coeffs) {
        word_digits(2, w, digits);
        out.terms.emplace_back(
            word_from_digits(3, digits.data(), static_cast<int>(digits.size())), c);
    }
    return out;
}

// Conditional extreme of a Brownian bridge over one step, exact inverse
// transform given a uniform draw.
double bridge_max(double a, double b, double var, double u) {
    double d = b - a;
    return 0.5 * (a + b + std::sqrt(d * d - 2.0 * var * std::log(u)));
}
double bridge_min(double a, double b, double var, double u) {
    double d = b - a;
    return 0.5 * (a + b - std::sqrt(d * d - 2.0 * var * std::log(u)));
}

struct DeltaTarget {
    PayoffKind kind;
    double strike, barrier, nominal, sigma, T;
    double operator()(double t, double P, double I) const {
        switch (kind) {
            case PayoffKind::EuropeanCall:
                return nominal * bachelier_call_delta(P, strike, sigma, T - t);
            case PayoffKind::AsianCall:
                return nominal * bachelier_asian_call_delta(t, P, I, strike, sigma, T);
            case PayoffKind::EuropeanQuadratic:
                return 2.0 * nominal * (P - strike);
            case PayoffKind::AsianQuadratic: {
                double tau = T - t;
                return 2.0 * nominal * ((I + P * tau) / T - strike) * tau / T;
            }
            default:
                throw std::invalid_argument(
                    std::string("delta tracking: no closed-form Bachelier delta for ") +
                    payoff_kind_name(kind));
        }
    }
};

}  // namespace

MarketState step_market(const MarketState& state, double theta, double dW, double dt,
                        const MarketParams& m) {
    MarketState next = state;
    next.t += dt;
    next.S += m.mu * dt + m.sigma * dW;
    next.X += theta * dt;
    next.P = next.S + m.nu * (next.X - m.X0);
    next.cost += (state.P + m.eta * theta) * theta * dt;
    return next;
}

double feedback_speed(const RiccatiSolution& sol, const SignaturePayoff& payoff,
                      const MarketParams& m, double t, double X,
                      const DenseTensor& sig3) {
    DenseTensor psi(3, sol.trunc);
    sol.interpolate(t, psi);
    const std::size_t n_low = word_space_size(3, sol.trunc - 1);
    double qdot = 0.0;
    for (std::size_t i = 0; i < n_low && i < sig3.v.size(); ++i)
        qdot += (m.nu * psi.v[3 * i + 2] + psi.v[3 * i + 3]) * sig3.v[i];
    LiftedSparse xi2 = lift_sparse(
        proj_word(xi_at(payoff, t, m.sigma), word_from_string(2, "2")));
    double target = xi2.dot(sig3);
    return (m.nu * (X - target) - qdot) / (2.0 * m.eta);
}

double delta_tracking_speed(const MarketParams& m, const PathPayoff& target,
                            double t, double P, double I, double X) {
    DeltaTarget dt{target.kind, target.strike, target.barrier, target.nominal,
                   m.sigma, m.T};
    return no_permanent_gain(t, m) / m.eta * (dt(t, P, I) - X);
}

double default_initial_inventory(const SignaturePayoff& payoff, double sigma) {
    return proj_word(xi_at(payoff, 0.0, sigma), word_from_string(2, "2")).at(kEmptyWord);
}

double indifference_price_riccati(const SignaturePayoff& payoff, const MarketParams& m,
                                  int trunc, int n_ode) {
    RiccatiParams rp;
    rp.market = m;
    rp.payoff = payoff;
    rp.trunc = trunc;
    rp.n_ode = n_ode;
    RiccatiSolution sol = solve_backward(rp);
    return xi_at(payoff, 0.0, m.sigma).at(kEmptyWord) + sol.psi0_empty();
}

namespace {

// Per-node tensors shared across paths.
struct StepTables {
    std::vector<double> times;
    std::vector<LiftedSparse> mark;     // xi_{t_k}
    std::vector<LiftedSparse> xi2;      // xi_{t_k} |> 2
    double xi0_empty = 0.0;
};

StepTables build_step_tables(const HedgeInstrument& inst, const MarketParams& m,
                             int n_steps) {
    StepTables tab;
    const double dt = m.T / n_steps;
    tab.times.resize(n_steps + 1);
    tab.mark.resize(n_steps + 1);
    tab.xi2.resize(n_steps + 1);
    const WordIndex w2 = word_from_string(2, "2");
    for (int k = 0; k <= n_steps; ++k) {
        double t = std::min(m.T, k * dt);
        tab.times[k] = t;
        TensorSeries xt = xi_at(inst.sig, t, m.sigma);
        tab.mark[k] = lift_sparse(xt);
        tab.xi2[k] = lift_sparse(proj_word(xt, w2));
        if (k == 0) tab.xi0_empty = xt.at(kEmptyWord);
    }
    return tab;
}

struct StrategyRuntime {
    StrategyKind kind;
    int sig_trunc = 0;
    // SigFeedback: q_k = nu psi|>2 + psi|>3 per node, dense.
    std::vector<DenseTensor> q;
    // Benchmark: xi_hat per node (lifted) and gain f(t_k).
    std::vector<LiftedSparse> xi_hat;
    std::vector<double> gain;
    // Delta tracking target.
    std::optional<DeltaTarget> delta;
};

StrategyRuntime build_strategy_runtime(const StrategySpec& spec,
                                       const HedgeInstrument& inst,
                                       const MarketParams& m, const StepTables& tab) {
    StrategyRuntime rt;
    rt.kind = spec.kind;
    const int deg_xi = std::max(1, inst.sig.xi.degree());
    const int n_nodes = static_cast<int>(tab.times.size());
    switch (spec.kind) {
        case StrategyKind::SigFeedback: {
            if (spec.riccati == nullptr)
                throw std::invalid_argument("SigFeedback strategy needs a Riccati solution");
            if (!(m.eta > 0.0))
                throw std::invalid_argument("SigFeedback requires eta > 0");
            const RiccatiSolution& sol = *spec.riccati;
            rt.sig_trunc = std::max(deg_xi, sol.trunc - 1);
            rt.q.reserve(n_nodes);
            DenseTensor psi(3, sol.trunc);
            const std::size_t n_low = word_space_size(3, sol.trunc - 1);
            for (int k = 0; k < n_nodes; ++k) {
                sol.interpolate(tab.times[k], psi);
                DenseTensor q(3, sol.trunc - 1);
                for (std::size_t i = 0; i < n_low; ++i)
                    q.v[i] = m.nu * psi.v[3 * i + 2] + psi.v[3 * i + 3];
                rt.q.push_back(std::move(q));
            }
            break;
        }
        case StrategyKind::NoPermanentBenchmark: {
            if (!(m.eta > 0.0))
                throw std::invalid_argument("benchmark strategy requires eta > 0");
            MarketParams m0 = m;
            m0.nu = 0.0;
            m0.mu = 0.0;
            rt.sig_trunc = deg_xi;
            rt.xi_hat.reserve(n_nodes);
            rt.gain.reserve(n_nodes);
            for (int k = 0; k < n_nodes; ++k) {
                rt.xi_hat.push_back(lift_sparse(xi_hat_no_permanent(
                    inst.sig, m0, tab.times[k], spec.xi_hat_quad)));
                rt.gain.push_back(no_permanent_gain(tab.times[k], m0));
            }
            break;
        }
        case StrategyKind::DeltaTracking: {
            if (!inst.exact)
                throw std::invalid_argument("delta tracking needs a path payoff target");
            rt.sig_trunc = deg_xi;
            rt.delta = DeltaTarget{inst.exact->kind, inst.exact->strike,
                                   inst.exact->barrier, inst.exact->nominal, m.sigma,
                                   m.T};
            // Validate the kind up-front (throws for unsupported targets).
            (*rt.delta)(0.0, m.S0, 0.0);
            break;
        }
        case StrategyKind::ZeroTrading:
            rt.sig_trunc = deg_xi;
            break;
    }
    return rt;
}

// Running per-path state of one strategy.
struct PathState {
    MarketState mkt;
    DenseTensor sig;
    double R_prev = 0.0;
    double qv = 0.0;
    double integral_P = 0.0;  // trapezoidal int_0^t P ds
    double max_P = 0.0, min_P = 0.0;
};

}  // namespace

SimResult run_paths(const MarketParams& m, const HedgeInstrument& instrument,
                    std::span<const StrategySpec> strategies, const SimOptions& opt) {
    m.validate();
    if (opt.n_paths < 1 || opt.n_steps < 1)
        throw std::invalid_argument("run_paths: need n_paths, n_steps >= 1");
    if (strategies.empty()) throw std::invalid_argument("run_paths: no strategies");

    const int n = opt.n_steps;
    const double dt = m.T / n;
    const double sdt = std::sqrt(dt);
    const int n_strat = static_cast<int>(strategies.size());

    StepTables tab = build_step_tables(instrument, m, n);
    std::vector<StrategyRuntime> rts;
    rts.reserve(n_strat);
    for (const auto& spec : strategies)
        rts.push_back(build_strategy_runtime(spec, instrument, m, tab));

    SimResult res;
    res.market = m;
    res.seed = opt.seed;
    res.n_paths = opt.n_paths;
    res.n_steps = n;
    res.strategies.resize(n_strat);
    for (int s = 0; s < n_strat; ++s) {
        res.strategies[s].label = strategies[s].label.empty()
                                      ? std::string("strategy_") + std::to_string(s)
                                      : strategies[s].label;
        res.strategies[s].RT.resize(opt.n_paths);
        res.strategies[s].qv.resize(opt.n_paths);
        res.strategies[s].payoff.resize(opt.n_paths);
    }
    const int n_store = std::min(opt.store_paths, opt.n_paths);
    res.trajectories.assign(
        n_store > 0 ? n_strat : 0,
        std::vector<std::vector<TrajectoryRow>>(
            n_store, std::vector<TrajectoryRow>(n + 1)));

    const bool want_bridge_max =
        opt.bridge_extremes && instrument.exact &&
        instrument.exact->kind == PayoffKind::OneTouchMax;
    const bool want_bridge_min =
        opt.bridge_extremes && instrument.exact &&
        instrument.exact->kind == PayoffKind::LookbackFloatCall;
    const double base_cash = m.V0 - m.X0 * m.S0;

#ifdef _OPENMP
    int n_threads = opt.n_threads > 0 ? opt.n_threads : omp_get_max_threads();
#pragma omp parallel num_threads(n_threads)
#endif
    {
        std::vector<PathState> st;
        st.reserve(n_strat);
        int max_trunc = 1;
        for (const auto& rt : rts) max_trunc = std::max(max_trunc, rt.sig_trunc);
        ChenWorkspace ws(3, max_trunc);
        std::vector<double> dW(n);

#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int p = 0; p < opt.n_paths; ++p) {
            auto rng = path_rng(opt.seed, static_cast<std::uint64_t>(p));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (int k = 0; k < n; ++k) dW[k] = sdt * gauss(rng);

            st.clear();
            for (int s = 0; s < n_strat; ++s) {
                PathState ps{MarketState{0.0, m.S0, m.S0, m.X0, 0.0},
                             DenseTensor(3, rts[s].sig_trunc), 0.0, 0.0, 0.0,
                             m.S0, m.S0};
                ps.sig.v[0] = 1.0;
                ps.R_prev = base_cash + ps.mkt.X * ps.mkt.P - tab.xi0_empty;
                st.push_back(std::move(ps));
            }

            for (int k = 0; k < n; ++k) {
                for (int s = 0; s < n_strat; ++s) {
                    PathState& ps = st[s];
                    const StrategyRuntime& rt = rts[s];
                    double theta = 0.0;
                    switch (rt.kind) {
                        case StrategyKind::SigFeedback: {
                            double target = tab.xi2[k].dot(ps.sig);
                            double qdot = dot(rt.q[k], ps.sig);
                            theta = (m.nu * (ps.mkt.X - target) - qdot) /
                                    (2.0 * m.eta);
                            break;
                        }
                        case StrategyKind::NoPermanentBenchmark: {
                            double target = rt.xi_hat[k].dot(ps.sig);
                            theta = rt.gain[k] / m.eta * (target - ps.mkt.X);
                            break;
                        }
                        case StrategyKind::DeltaTracking: {
                            double target = (*rt.delta)(tab.times[k], ps.mkt.P,
                                                        ps.integral_P);
                            theta = no_permanent_gain(tab.times[k], m) / m.eta *
                                    (target - ps.mkt.X);
                            break;
                        }
                        case StrategyKind::ZeroTrading:
                            theta = 0.0;
                            break;
                    }

                    if (!res.trajectories.empty() && p < n_store)
                        res.trajectories[s][p][k] = {tab.times[k], ps.mkt.S,
                                                     ps.mkt.P,    ps.mkt.X,
                                                     theta,       ps.R_prev};

                    MarketState next = step_market(ps.mkt, theta, dW[k], dt, m);
                    double dx[3] = {dt, next.P - ps.mkt.P, next.X - ps.mkt.X};
                    chen_advance(ps.sig, dx, ws);

                    ps.integral_P += 0.5 * (ps.mkt.P + next.P) * dt;
                    if (want_bridge_max) {
                        double u = counter_uniform(opt.seed, p, k, kBridgeTagMax);
                        ps.max_P = std::max(
                            ps.max_P,
                            bridge_max(ps.mkt.P, next.P, m.sigma * m.sigma * dt, u));
                    } else {
                        ps.max_P = std::max(ps.max_P, next.P);
                    }
                    if (want_bridge_min) {
                        double u = counter_uniform(opt.seed, p, k, kBridgeTagMin);
                        ps.min_P = std::min(
                            ps.min_P,
                            bridge_min(ps.mkt.P, next.P, m.sigma * m.sigma * dt, u));
                    } else {
                        ps.min_P = std::min(ps.min_P, next.P);
                    }
                    ps.mkt = next;

                    double R;
                    if (k + 1 < n) {
                        double mark = tab.mark[k + 1].dot(ps.sig);
                        R = base_cash + ps.mkt.X * ps.mkt.P - ps.mkt.cost - mark;
                    } else {
                        double H;
                        if (instrument.exact) {
                            H = payoff_from_stats(*instrument.exact, m.T, ps.mkt.P,
                                                  ps.integral_P, ps.max_P, ps.min_P);
                        } else {
                            H = tab.mark[n].dot(ps.sig);
                        }
                        res.strategies[s].payoff[p] = H;
                        R = base_cash + ps.mkt.X * ps.mkt.P - ps.mkt.cost - H;
                    }
                    double dR = R - ps.R_prev;
                    ps.qv += dR * dR;
                    ps.R_prev = R;
                }
            }

            for (int s = 0; s < n_strat; ++s) {
                res.strategies[s].RT[p] = st[s].R_prev;
                res.strategies[s].qv[p] = st[s].qv;
                if (!res.trajectories.empty() && p < n_store)
                    res.trajectories[s][p][n] = {m.T,        st[s].mkt.S, st[s].mkt.P,
                                                 st[s].mkt.X, 0.0,        st[s].R_prev};
            }
        }
    }

    // Deterministic reduction in path order.
    for (int s = 0; s < n_strat; ++s) {
        StrategyStats& out = res.strategies[s];
        const int np = opt.n_paths;
        double sum_R = 0.0, sum_qv = 0.0, sum_pay = 0.0;
        for (int p = 0; p < np; ++p) {
            sum_R += out.RT[p];
            sum_qv += out.qv[p];
            sum_pay += out.payoff[p];
        }
        out.mean_RT = sum_R / np;
        out.mean_qv = sum_qv / np;
        out.mean_payoff = sum_pay / np;
        double var_R = 0.0, var_m = 0.0, var_p = 0.0, sum_m = 0.0;
        for (int p = 0; p < np; ++p) {
            double v = out.RT[p] - 0.5 * m.lambda * out.qv[p];
            sum_m += v;
        }
        out.mqv = sum_m / np;
        for (int p = 0; p < np; ++p) {
            double v = out.RT[p] - 0.5 * m.lambda * out.qv[p];
            var_R += (out.RT[p] - out.mean_RT) * (out.RT[p] - out.mean_RT);
            var_m += (v - out.mqv) * (v - out.mqv);
            var_p += (out.payoff[p] - out.mean_payoff) *
                     (out.payoff[p] - out.mean_payoff);
        }
        if (np > 1) {
            out.se_RT = std::sqrt(var_R / (np - 1) / np);
            out.se_mqv = std::sqrt(var_m / (np - 1) / np);
            out.se_payoff = std::sqrt(var_p / (np - 1) / np);
        }
    }
    return res;
}

McPrice indifference_price_mc(const HedgeInstrument& instrument, MarketParams m,
                              const RiccatiSolution& sol, const SimOptions& opt) {
    m.V0 = 0.0;
    StrategySpec spec;
    spec.kind = StrategyKind::SigFeedback;
    spec.label = "sig_feedback";
    spec.riccati = &sol;
    SimResult res = run_paths(m, instrument, std::span(&spec, 1), opt);
    return McPrice{-res.strategies[0].mqv, res.strategies[0].se_mqv};
}

}  // namespace sighedge
