#pragma once

namespace essvi {

/// Forward-measure Black pricing inputs. total_variance is sigma^2 * t.
struct PricingInput {
    double forward;
    double strike;
    double rate;            // continuously compounded
    double maturity;        // year fraction
    double total_variance;  // > 0
    bool is_call;
};

double norm_cdf(double x);
double norm_pdf(double x);

/// Discounted Black price e^{-rt} [F N(d1) - K N(d2)] (put via the mirrored form).
double price(const PricingInput& input);

/// d(price)/d(volatility) with sigma = sqrt(w / t). Identical for calls and puts.
double vega(const PricingInput& input);

/// Inverts the Black formula for the total implied variance.
///
/// Bisection-safeguarded Newton on annualized vol over [1e-6, 5.0].
/// Throws PriceOutOfBounds when market_price violates the static arbitrage
/// bounds, NoConvergence after 200 iterations.
double implied_total_variance(double market_price, double forward, double strike, double rate,
                              double maturity, bool is_call);

}  // namespace essvi
