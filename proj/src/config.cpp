#include "sighedge/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sighedge {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double to_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + where + ": '" + v + "'");
    }
}

long long to_int(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + where + ": '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& where) {
    std::string s = lower(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("config: bad boolean for " + where + ": '" + v + "'");
}

std::vector<double> to_list(const std::string& v, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, where));
    }
    return out;
}

std::vector<std::string> to_names(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(lower(item));
    }
    return out;
}

}  // namespace

ConfigMap parse_ini(std::istream& in, const std::string& origin) {
    ConfigMap out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: bad section header at " + origin + ":" +
                                  std::to_string(lineno));
            section = lower(trim(line.substr(1, line.size() - 2)));
            out[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at " + origin + ":" +
                              std::to_string(lineno));
        std::string key = lower(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key at " + origin + ":" +
                              std::to_string(lineno));
        out[section][key] = value;
    }
    return out;
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    ConfigMap ini = parse_ini(in, origin);
    ExperimentConfig cfg;

    auto get = [&](const std::string& sec, const std::string& key,
                   const std::string** out_val) {
        auto s = ini.find(sec);
        if (s == ini.end()) return false;
        auto k = s->second.find(key);
        if (k == s->second.end()) return false;
        *out_val = &k->second;
        return true;
    };
    auto num = [&](const std::string& sec, const std::string& key, double& dst) {
        const std::string* v;
        if (get(sec, key, &v)) dst = to_double(*v, sec + "." + key);
    };
    auto integer = [&](const std::string& sec, const std::string& key, int& dst) {
        const std::string* v;
        if (get(sec, key, &v)) dst = static_cast<int>(to_int(*v, sec + "." + key));
    };
    auto seed64 = [&](const std::string& sec, const std::string& key,
                      std::uint64_t& dst) {
        const std::string* v;
        if (get(sec, key, &v))
            dst = static_cast<std::uint64_t>(to_int(*v, sec + "." + key));
    };
    auto boolean = [&](const std::string& sec, const std::string& key, bool& dst) {
        const std::string* v;
        if (get(sec, key, &v)) dst = to_bool(*v, sec + "." + key);
    };

    num("market", "s0", cfg.market.S0);
    num("market", "mu", cfg.market.mu);
    num("market", "sigma", cfg.market.sigma);
    num("market", "t", cfg.market.T);
    num("market", "eta", cfg.market.eta);
    num("market", "nu", cfg.market.nu);
    num("market", "lambda", cfg.market.lambda);
    {
        const std::string* v;
        if (get("market", "x0", &v)) {
            if (lower(*v) == "auto") {
                cfg.x0_auto = true;
            } else {
                cfg.x0_auto = false;
                cfg.market.X0 = to_double(*v, "market.x0");
            }
        }
        if (get("market", "v0", &v)) {
            if (lower(*v) == "auto") {
                cfg.v0_auto = true;
            } else {
                cfg.v0_auto = false;
                cfg.market.V0 = to_double(*v, "market.v0");
            }
        }
    }

    {
        const std::string* v;
        if (get("payoff", "kind", &v)) cfg.payoff_kind = lower(*v);
        if (get("payoff", "alpha", &v)) cfg.alpha = to_list(*v, "payoff.alpha");
    }
    num("payoff", "nominal", cfg.nominal);
    num("payoff", "strike_mult", cfg.strike_mult);
    num("payoff", "barrier_mult", cfg.barrier_mult);

    integer("riccati", "n_ode", cfg.n_ode);
    integer("riccati", "trunc", cfg.trunc);

    integer("simulation", "n_paths", cfg.n_paths);
    integer("simulation", "n_steps", cfg.n_steps);
    seed64("simulation", "seed", cfg.sim_seed);
    boolean("simulation", "bridge_extremes", cfg.bridge_extremes);
    integer("simulation", "trajectories", cfg.trajectories);

    {
        const std::string* v;
        if (get("strategies", "list", &v)) cfg.strategies = to_names(*v);
    }

    integer("regression", "m", cfg.reg_M);
    integer("regression", "l", cfg.reg_L);
    integer("regression", "j", cfg.reg_J);
    seed64("regression", "seed", cfg.reg_seed);
    num("regression", "ridge", cfg.ridge);

    {
        const std::string* v;
        if (get("price", "nu_list", &v)) cfg.nu_list = to_list(*v, "price.nu_list");
        if (get("output", "dir", &v)) cfg.out_dir = *v;
    }
    integer("output", "threads", cfg.threads);

    try {
        cfg.market.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (cfg.n_paths < 1 || cfg.n_steps < 1)
        throw ConfigError("config: simulation.n_paths and n_steps must be >= 1");
    if (cfg.n_ode < 2) throw ConfigError("config: riccati.n_ode must be >= 2");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    return parse_config(in, path);
}

void write_config_template(std::ostream& os) {
    os << "# sighedge experiment configuration\n"
          "\n"
          "[market]\n"
          "s0 = 10.0        # initial price\n"
          "mu = 0.0         # drift, price per year\n"
          "sigma = 2.0      # volatility, price per sqrt(year)\n"
          "t = 0.2          # maturity, years\n"
          "eta = 0.001      # temporary impact, price per (share/year)\n"
          "nu = 0.001       # permanent impact, price per share\n"
          "lambda = 0.01    # risk aversion\n"
          "x0 = auto        # initial shares; auto = payoff delta at inception\n"
          "v0 = auto        # initial wealth; auto = indifference price\n"
          "\n"
          "[payoff]\n"
          "kind = asian_quadratic  # european_call | asian_call | one_touch |\n"
          "                        # lookback | european_quadratic | asian_quadratic |\n"
          "                        # european_poly | asian_poly\n"
          "nominal = 200\n"
          "strike_mult = 1.0       # K = strike_mult * s0\n"
          "barrier_mult = 1.05     # H = barrier_mult * s0 (one_touch)\n"
          "# alpha = 0,0,1         # polynomial coefficients (european/asian_poly)\n"
          "\n"
          "[riccati]\n"
          "n_ode = 2000     # RK4 steps on [0, T]\n"
          "trunc = 0        # 0 = 2 max(1, deg xi - 1)\n"
          "\n"
          "[simulation]\n"
          "n_paths = 100000\n"
          "n_steps = 500\n"
          "seed = 42\n"
          "bridge_extremes = true  # Brownian-bridge extremes for one_touch/lookback\n"
          "trajectories = 0        # paths dumped to trajectories.csv\n"
          "\n"
          "[strategies]\n"
          "list = sig_feedback,no_permanent  # also: delta_tracking, zero\n"
          "\n"
          "[regression]\n"
          "m = 5            # signature truncation of the learned tensor\n"
          "l = 100000       # training paths\n"
          "j = 500          # training grid points\n"
          "seed = 7\n"
          "ridge = 0\n"
          "\n"
          "[price]\n"
          "nu_list = 0,0.0005,0.001,0.0015\n"
          "\n"
          "[output]\n"
          "dir = out\n"
          "threads = 0      # 0 = all cores\n";
}

}  // namespace sighedge
