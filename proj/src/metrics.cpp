#include "essvi/metrics.hpp"

#include <cmath>

#include "essvi/black_scholes.hpp"
#include "essvi/errors.hpp"

namespace essvi {

FitReport fit_report(const std::vector<EssviSlice>& slices,
                     const std::vector<SliceAnchor>& anchors) {
    if (anchors.empty()) throw EmptySurface("no anchors");
    if (slices.size() != anchors.size()) throw Error("slice/anchor count mismatch");

    const QuoteWeights weights = make_weights(anchors, {WeightScheme::InverseVegaSquared});

    FitReport rep{0.0, 0.0, 0.0, 0.0, 0, {}};
    double wsum_total = 0.0, f4_num_total = 0.0;
    std::size_t idx = 0;

    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const auto& a = anchors[i];
        MaturityFit row{a.maturity, 0, 0.0, 0.0, 0.0, 0.0};
        int n_within = 0;
        double abs_sum = 0.0, sq_sum = 0.0, wsq_sum = 0.0, wsum = 0.0;
        for (const auto& q : a.quotes) {
            const double w = total_variance(slices[i], q.k);
            const double model = price({a.forward, q.strike, a.rate, a.maturity, w, q.is_call});
            const double err = q.mid - model;
            if (model >= q.bid && model <= q.ask) ++n_within;
            abs_sum += std::abs(err);
            sq_sum += err * err;
            wsq_sum += weights.w[idx] * err * err;
            wsum += weights.w[idx];
            ++idx;
        }
        row.n = static_cast<int>(a.quotes.size());
        if (row.n > 0) {
            row.f1 = static_cast<double>(n_within) / row.n;
            row.f2 = abs_sum / row.n;
            row.f3 = sq_sum / row.n;
            row.f4 = wsum > 0.0 ? wsq_sum / wsum : 0.0;
        }
        rep.per_maturity.push_back(row);
        rep.n_total += row.n;
        rep.f1 += n_within;
        rep.f2 += abs_sum;
        rep.f3 += sq_sum;
        f4_num_total += wsq_sum;
        wsum_total += wsum;
    }
    if (rep.n_total > 0) {
        rep.f1 /= rep.n_total;
        rep.f2 /= rep.n_total;
        rep.f3 /= rep.n_total;
        rep.f4 = wsum_total > 0.0 ? f4_num_total / wsum_total : 0.0;
    }
    return rep;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

ChainCorrelations chain_correlations(const std::vector<SliceAnchor>& anchors) {
    std::vector<double> vegas, spreads, dtes;
    for (const auto& a : anchors) {
        for (const auto& q : a.quotes) {
            vegas.push_back(q.vega);
            spreads.push_back(q.ask - q.bid);
            dtes.push_back(a.maturity * 365.0);
        }
    }
    return {pearson(vegas, spreads), pearson(dtes, spreads)};
}

}  // namespace essvi
