#ifndef SIGHEDGE_CONFIG_HPP
#define SIGHEDGE_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sighedge/market_params.hpp"

namespace sighedge {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment description parsed from an INI-style file: [section] headers,
// key = value lines, '#' comments, units documented in the template
// (see write_config_template).
struct ExperimentConfig {
    MarketParams market;
    bool x0_auto = true;   // x0 = (xi_0 |> 2)^empty
    bool v0_auto = true;   // v0 = indifference price

    std::string payoff_kind = "asian_quadratic";
    double nominal = 200.0;
    double strike_mult = 1.0;   // K = strike_mult * S0
    double barrier_mult = 1.05; // H = barrier_mult * S0
    std::vector<double> alpha;  // polynomial payoffs

    int n_ode = 2000;
    int trunc = 0;              // 0 = default 2 max(1, deg xi - 1)

    int n_paths = 100000;
    int n_steps = 500;
    std::uint64_t sim_seed = 42;
    bool bridge_extremes = true;
    int trajectories = 0;

    std::vector<std::string> strategies{"sig_feedback"};

    int reg_M = 5;
    int reg_L = 100000;
    int reg_J = 500;
    std::uint64_t reg_seed = 7;
    double ridge = 0.0;

    std::vector<double> nu_list;
    std::string out_dir = "out";
    int threads = 0;
};

ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<stream>");
ExperimentConfig load_config(const std::string& path);

// Annotated template with the defaults, suitable as a starting point.
void write_config_template(std::ostream& os);

// Raw section/key view, exposed for tests.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;
ConfigMap parse_ini(std::istream& in, const std::string& origin);

}  // namespace sighedge

#endif
