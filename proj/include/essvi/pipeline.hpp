#pragma once

#include <string>
#include <vector>

namespace essvi {

struct OptionQuote {
    std::string expiry;
    double maturity;  // year fraction
    double strike;
    double bid;
    double ask;
    bool is_call;

    double mid() const { return 0.5 * (bid + ask); }
};

struct RatePoint {
    double tenor;  // years
    double rate;
};

struct OptionChain {
    std::string quote_date;
    double underlying;
    std::vector<RatePoint> curve;  // tenors strictly increasing
    std::vector<OptionQuote> quotes;
};

/// A quote surviving the filters, with precomputed pricing inputs.
struct AnchorQuote {
    double strike;
    double k;  // ln(K/F)
    double bid;
    double ask;
    double mid;
    bool is_call;
    double implied_w;    // implied total variance of the mid
    double implied_vol;  // sqrt(implied_w / t)
    double vega;         // Black vega at the market mid vol
};

/// Per-maturity anchor: forward, the (k*, theta*) data point closest to the
/// ATM forward, and the surviving quotes.
struct SliceAnchor {
    double maturity;
    double forward;
    double rate;  // interpolated zero rate at this maturity
    double k_star;
    double theta_star;
    std::vector<AnchorQuote> quotes;
};

/// Linear interpolation of the zero rate over tenor, flat beyond endpoints.
double interpolate_rate(const std::vector<RatePoint>& curve, double tenor);

/// Average implied dividend yield over all put-call pairs at one maturity,
/// q = (1/t) [ln S - ln(C - P + K e^{-rt})] per pair. Pairs whose log
/// argument is nonpositive are skipped; throws NoPairs when no pair exists
/// or every pair is skipped.
double implied_dividend_yield(const OptionChain& chain, double maturity);

/// Carry forward F = S e^{(r - q) t}.
double forward(const OptionChain& chain, double maturity, double dividend_yield);

/// Applies the three filters per maturity (forward-ITM, 5% spread, straddle
/// requirement), selects the anchor quote, and returns maturity-ordered
/// anchors. Throws EmptyChain when no maturity survives.
std::vector<SliceAnchor> filter_chain(const OptionChain& chain);

}  // namespace essvi
