#pragma once

#include <vector>

#include "essvi/global_calib.hpp"
#include "essvi/pipeline.hpp"
#include "essvi/slice.hpp"

namespace essvi {

struct MaturityFit {
    double maturity;
    int n;
    double f1;
    double f2;
    double f3;
    double f4;
};

/// The four fit measures over a calibrated surface and its filtered chain:
/// F1 within-spread fraction (inclusive bounds), F2 mean absolute price
/// error, F3 mean squared price error, F4 inverse-vega^2 weighted mean
/// squared price error.
struct FitReport {
    double f1;
    double f2;
    double f3;
    double f4;
    int n_total;
    std::vector<MaturityFit> per_maturity;
};

/// One slice per anchor, maturity-aligned. Throws EmptySurface when anchors
/// are empty.
FitReport fit_report(const std::vector<EssviSlice>& slices,
                     const std::vector<SliceAnchor>& anchors);

/// Pearson correlation coefficient; returns 0 for degenerate samples.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Correlation diagnostics across a chain's surviving quotes: vega vs
/// bid-ask spread and days-to-expiry vs spread.
struct ChainCorrelations {
    double vega_vs_spread;
    double dte_vs_spread;
};
ChainCorrelations chain_correlations(const std::vector<SliceAnchor>& anchors);

}  // namespace essvi
