#include "essvi/black_scholes.hpp"

#include <algorithm>
#include <cmath>

#include "essvi/errors.hpp"

namespace essvi {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kVolLo = 1e-6;
constexpr double kVolHi = 5.0;
constexpr int kMaxIter = 200;
}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double price(const PricingInput& in) {
    const double df = std::exp(-in.rate * in.maturity);
    if (in.total_variance < 1e-300) {
        const double intrinsic = in.is_call ? std::max(in.forward - in.strike, 0.0)
                                            : std::max(in.strike - in.forward, 0.0);
        return df * intrinsic;
    }
    const double sw = std::sqrt(in.total_variance);
    const double d1 = std::log(in.forward / in.strike) / sw + 0.5 * sw;
    const double d2 = d1 - sw;
    if (in.is_call) return df * (in.forward * norm_cdf(d1) - in.strike * norm_cdf(d2));
    return df * (in.strike * norm_cdf(-d2) - in.forward * norm_cdf(-d1));
}

double vega(const PricingInput& in) {
    const double sw = std::sqrt(in.total_variance);
    const double d1 = std::log(in.forward / in.strike) / sw + 0.5 * sw;
    return std::exp(-in.rate * in.maturity) * in.forward * norm_pdf(d1) * std::sqrt(in.maturity);
}

double implied_total_variance(double market_price, double forward, double strike, double rate,
                              double maturity, bool is_call) {
    const double df = std::exp(-rate * maturity);
    const double intrinsic =
        df * (is_call ? std::max(forward - strike, 0.0) : std::max(strike - forward, 0.0));
    const double cap = df * (is_call ? forward : strike);
    if (!(market_price > intrinsic) || !(market_price < cap))
        throw PriceOutOfBounds("price outside (intrinsic, discounted cap)");

    PricingInput in{forward, strike, rate, maturity, 0.0, is_call};
    auto value = [&](double sigma) {
        in.total_variance = sigma * sigma * maturity;
        return price(in) - market_price;
    };

    double lo = kVolLo, hi = kVolHi;
    double flo = value(lo), fhi = value(hi);
    // Black price is increasing in vol; if the target sits outside the vol
    // bracket the nearest endpoint is the best representable answer.
    if (flo > 0.0) return lo * lo * maturity;
    if (fhi < 0.0) return hi * hi * maturity;

    double sigma = 0.5 * (lo + hi);
    for (int it = 0; it < kMaxIter; ++it) {
        const double f = value(sigma);
        if (std::abs(f) < 1e-10) return sigma * sigma * maturity;
        if (f > 0.0)
            hi = sigma;
        else
            lo = sigma;
        const double v = vega(in);
        double next = sigma - f / v;
        if (!(v > 0.0) || !(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-16 * sigma) return sigma * sigma * maturity;
        sigma = next;
    }
    throw NoConvergence("implied variance iteration cap reached");
}

}  // namespace essvi
