#include "essvi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "essvi/black_scholes.hpp"
#include "essvi/errors.hpp"

namespace essvi {

namespace {

constexpr double kMaxSpread = 0.05;

std::vector<double> sorted_maturities(const OptionChain& chain) {
    std::vector<double> ts;
    for (const auto& q : chain.quotes) ts.push_back(q.maturity);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

}  // namespace

double interpolate_rate(const std::vector<RatePoint>& curve, double tenor) {
    if (curve.empty()) return 0.0;
    if (tenor <= curve.front().tenor) return curve.front().rate;
    if (tenor >= curve.back().tenor) return curve.back().rate;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (tenor <= curve[i].tenor) {
            const auto& a = curve[i - 1];
            const auto& b = curve[i];
            const double t = (tenor - a.tenor) / (b.tenor - a.tenor);
            return a.rate + t * (b.rate - a.rate);
        }
    }
    return curve.back().rate;
}

double implied_dividend_yield(const OptionChain& chain, double maturity) {
    const double r = interpolate_rate(chain.curve, maturity);
    const double df = std::exp(-r * maturity);

    std::map<double, std::pair<double, double>> by_strike;  // strike -> (call mid, put mid)
    for (const auto& q : chain.quotes) {
        if (q.maturity != maturity) continue;
        auto& entry = by_strike.try_emplace(q.strike, -1.0, -1.0).first->second;
        (q.is_call ? entry.first : entry.second) = q.mid();
    }

    double sum = 0.0;
    int n_pairs = 0, n_used = 0;
    for (const auto& [strike, cp] : by_strike) {
        if (cp.first < 0.0 || cp.second < 0.0) continue;
        ++n_pairs;
        const double arg = cp.first - cp.second + strike * df;
        if (!(arg > 0.0)) continue;  // pair skipped
        // put-call parity gives C - P + K e^{-rt} = S e^{-qt}
        sum += (std::log(chain.underlying) - std::log(arg)) / maturity;
        ++n_used;
    }
    if (n_pairs == 0) throw NoPairs("no put-call pair at maturity");
    if (n_used == 0) throw NonPositiveLogArgument("every put-call pair had C - P + K e^{-rt} <= 0");
    return sum / n_used;
}

double forward(const OptionChain& chain, double maturity, double dividend_yield) {
    const double r = interpolate_rate(chain.curve, maturity);
    return chain.underlying * std::exp((r - dividend_yield) * maturity);
}

std::vector<SliceAnchor> filter_chain(const OptionChain& chain) {
    std::vector<SliceAnchor> anchors;

    for (double t : sorted_maturities(chain)) {
        double q_imp;
        try {
            q_imp = implied_dividend_yield(chain, t);
        } catch (const Error&) {
            continue;  // maturity unusable without a forward
        }
        const double r = interpolate_rate(chain.curve, t);
        const double fwd = forward(chain, t, q_imp);

        SliceAnchor anchor{t, fwd, r, 0.0, 0.0, {}};
        bool has_above = false, has_below = false;  // F/K > 1 and F/K < 1
        for (const auto& q : chain.quotes) {
            if (q.maturity != t) continue;
            // 1 part in 1e12 of slack keeps a strike sitting exactly at the
            // forward on both sides of the book
            const bool itm =
                q.is_call ? q.strike < fwd * (1.0 - 1e-12) : q.strike > fwd * (1.0 + 1e-12);
            if (itm) continue;
            const double mid = q.mid();
            if (!(mid > 0.0) || (q.ask - q.bid) / mid > kMaxSpread) continue;
            double w, vg;
            try {
                w = implied_total_variance(mid, fwd, q.strike, r, t, q.is_call);
                vg = vega({fwd, q.strike, r, t, w, q.is_call});
            } catch (const Error&) {
                continue;  // mid violates static bounds
            }
            anchor.quotes.push_back({q.strike, std::log(q.strike / fwd), q.bid, q.ask, mid,
                                     q.is_call, w, std::sqrt(w / t), vg});
            if (fwd / q.strike > 1.0) has_above = true;
            if (fwd / q.strike < 1.0) has_below = true;
        }
        if (!has_above || !has_below) continue;

        // Anchor quote: forward-to-strike ratio closest to 1; ties broken
        // toward the lower strike, then call before put.
        std::stable_sort(anchor.quotes.begin(), anchor.quotes.end(),
                         [](const AnchorQuote& a, const AnchorQuote& b) {
                             if (a.strike != b.strike) return a.strike < b.strike;
                             return a.is_call && !b.is_call;
                         });
        const AnchorQuote* best = nullptr;
        double best_dist = 0.0;
        for (const auto& q : anchor.quotes) {
            const double dist = std::abs(anchor.forward / q.strike - 1.0);
            if (!best || dist < best_dist) {
                best = &q;
                best_dist = dist;
            }
        }
        anchor.k_star = best->k;
        anchor.theta_star = best->implied_w;
        anchors.push_back(std::move(anchor));
    }

    if (anchors.empty()) throw EmptyChain("no maturity survived filtering");
    return anchors;
}

}  // namespace essvi
