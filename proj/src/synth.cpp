#include "essvi/synth.hpp"

#include <cmath>
#include <cstdio>

#include "essvi/black_scholes.hpp"
#include "essvi/global_calib.hpp"

namespace essvi {

SynthResult generate_chain(const SynthConfig& cfg) {
    Rng rng(cfg.seed);
    const int n = cfg.n_maturities;

    std::vector<double> maturities(n);
    for (int i = 0; i < n; ++i) maturities[i] = 0.1 + 0.2 * i;

    const double atm_vol = rng.uniform(0.15, 0.30);
    GlobalParams par;
    par.theta1 = atm_vol * atm_vol * maturities[0];
    for (int i = 0; i < n; ++i) par.rho.push_back(rng.uniform(-0.6, 0.6));
    for (int i = 1; i < n; ++i)
        par.a.push_back(atm_vol * atm_vol * (maturities[i] - maturities[i - 1]) *
                        rng.uniform(0.5, 1.5));
    for (int i = 0; i < n; ++i) par.c.push_back(rng.uniform(0.3, 0.7));

    SynthResult out;
    out.surface = expand_params(par, maturities);

    out.chain.quote_date = "2024-01-02";
    out.chain.underlying = cfg.underlying;
    out.chain.curve = {{0.05, cfg.rate}, {10.0, cfg.rate}};

    for (int i = 0; i < n; ++i) {
        const double t = maturities[i];
        const double fwd =
            cfg.underlying * std::exp((cfg.rate - cfg.dividend_yield) * t);
        const double width = 1.6 * std::sqrt(out.surface[i].theta);
        char expiry[32];
        std::snprintf(expiry, sizeof expiry, "T%0.3f", t);
        for (int j = 0; j < cfg.n_strikes; ++j) {
            const double k =
                cfg.n_strikes == 1 ? 0.0 : width * (-1.0 + 2.0 * j / (cfg.n_strikes - 1));
            const double strike = fwd * std::exp(k);
            const double w = total_variance(out.surface[i], k);
            for (bool is_call : {true, false}) {
                double mid = price({fwd, strike, cfg.rate, t, w, is_call});
                if (cfg.mid_noise > 0.0) mid *= 1.0 + cfg.mid_noise * rng.uniform(-1.0, 1.0);
                if (!(mid > 1e-12)) continue;
                const double bid = mid * (1.0 - cfg.half_spread);
                const double ask = mid * (1.0 + cfg.half_spread);
                out.chain.quotes.push_back({expiry, t, strike, bid, ask, is_call});
            }
        }
    }
    return out;
}

}  // namespace essvi
