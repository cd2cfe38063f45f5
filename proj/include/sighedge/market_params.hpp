#ifndef SIGHEDGE_MARKET_PARAMS_HPP
#define SIGHEDGE_MARKET_PARAMS_HPP

#include <stdexcept>

namespace sighedge {

// Bachelier market with temporary (eta) and permanent (nu) impact.
// Units: prices in currency, T in years, sigma in price/sqrt(yr),
// mu in price/yr, eta in price per (share/yr), nu in price per share.
struct MarketParams {
    double mu = 0.0;
    double sigma = 2.0;
    double T = 0.2;
    double eta = 0.001;
    double nu = 0.001;
    double lambda = 0.01;
    double S0 = 10.0;
    double X0 = 0.0;
    double V0 = 0.0;

    void validate() const {
        if (!(sigma > 0.0)) throw std::invalid_argument("MarketParams: sigma <= 0");
        if (!(T > 0.0)) throw std::invalid_argument("MarketParams: T <= 0");
        if (eta < 0.0) throw std::invalid_argument("MarketParams: eta < 0");
        if (nu < 0.0) throw std::invalid_argument("MarketParams: nu < 0");
        if (!(lambda > 0.0)) throw std::invalid_argument("MarketParams: lambda <= 0");
    }
};

}  // namespace sighedge

#endif
