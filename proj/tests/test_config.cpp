#include <sstream>

#include "doctest.h"
#include "sighedge/config.hpp"

using namespace sighedge;

TEST_CASE("config defaults mirror the experiment parameters") {
    std::stringstream empty;
    auto cfg = parse_config(empty);
    CHECK(cfg.market.S0 == 10.0);
    CHECK(cfg.market.sigma == 2.0);
    CHECK(cfg.market.T == 0.2);
    CHECK(cfg.market.eta == 0.001);
    CHECK(cfg.market.nu == 0.001);
    CHECK(cfg.market.lambda == 0.01);
    CHECK(cfg.x0_auto);
    CHECK(cfg.v0_auto);
    CHECK(cfg.n_ode == 2000);
    CHECK(cfg.n_paths == 100000);
    CHECK(cfg.bridge_extremes);
}

TEST_CASE("config parsing with sections, comments and lists") {
    std::stringstream in(
        "# experiment\n"
        "[market]\n"
        "s0 = 20.0   # price\n"
        "nu = 0.0\n"
        "x0 = 3.5\n"
        "[payoff]\n"
        "kind = European_Call\n"
        "nominal = 50\n"
        "alpha = 0, 0, 1\n"
        "[price]\n"
        "nu_list = 0,0.0005, 0.001\n"
        "[simulation]\n"
        "seed = 9\n"
        "bridge_extremes = off\n"
        "[strategies]\n"
        "list = Sig_Feedback , zero\n");
    auto cfg = parse_config(in);
    CHECK(cfg.market.S0 == 20.0);
    CHECK(cfg.market.nu == 0.0);
    CHECK_FALSE(cfg.x0_auto);
    CHECK(cfg.market.X0 == 3.5);
    CHECK(cfg.payoff_kind == "european_call");
    CHECK(cfg.nominal == 50.0);
    CHECK(cfg.alpha.size() == 3);
    CHECK(cfg.nu_list.size() == 3);
    CHECK(cfg.sim_seed == 9);
    CHECK_FALSE(cfg.bridge_extremes);
    REQUIRE(cfg.strategies.size() == 2);
    CHECK(cfg.strategies[0] == "sig_feedback");
    CHECK(cfg.strategies[1] == "zero");
}

TEST_CASE("config errors are reported with locations") {
    std::stringstream bad1("[market\ns0 = 1\n");
    CHECK_THROWS_AS(parse_config(bad1), ConfigError);

    std::stringstream bad2("[market]\nsigma == 2\n");
    CHECK_THROWS_AS(parse_config(bad2), ConfigError);

    std::stringstream bad3("[market]\nsigma = -1\n");
    CHECK_THROWS_AS(parse_config(bad3), ConfigError);

    std::stringstream bad4("[simulation]\nn_paths = 0\n");
    CHECK_THROWS_AS(parse_config(bad4), ConfigError);
}

TEST_CASE("config template parses to the defaults") {
    std::stringstream ss;
    write_config_template(ss);
    auto cfg = parse_config(ss);
    CHECK(cfg.market.S0 == 10.0);
    CHECK(cfg.n_ode == 2000);
    CHECK(cfg.strategies.size() == 2);
}
