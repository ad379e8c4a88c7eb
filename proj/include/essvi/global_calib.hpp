#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "essvi/pipeline.hpp"
#include "essvi/slice.hpp"

namespace essvi {

/// Rectangular parameter vector of the global calibrator:
/// (rho_1..rho_n, theta_1, a_2..a_n, c_1..c_n) in
/// (-1,1)^n x (0,inf)^n x (0,1)^n.
struct GlobalParams {
    std::vector<double> rho;  // length n
    double theta1;
    std::vector<double> a;  // length n-1
    std::vector<double> c;  // length n

    std::size_t n() const { return rho.size(); }
};

struct WeightScheme {
    enum Kind { InverseVegaSquared, Constant };
    Kind kind = InverseVegaSquared;
};

/// Maps the rectangular parameters to eSSVI slices. By construction the
/// result satisfies G1-G4 with strict inequalities. Throws EmptyBox when a
/// psi interval collapses (cannot happen for parameters inside the box).
std::vector<EssviSlice> expand_params(const GlobalParams& p,
                                      const std::vector<double>& maturities);

/// Inverse of expand_params. Throws NotInBox when any implied a_i <= 0 or
/// c_i lies outside (0, 1).
GlobalParams compress_params(const std::vector<EssviSlice>& slices);

/// Like compress_params but projects boundary values into the open box:
/// c into [1e-6, 1-1e-6], a floored at 1e-8 theta_1.
GlobalParams compress_params_projected(const std::vector<EssviSlice>& slices);

/// Per-quote weights, flattened in anchor order. InverseVegaSquared weights
/// are capped at 1e8 times the median; n_capped reports how many were.
struct QuoteWeights {
    std::vector<double> w;
    int n_capped = 0;
};
QuoteWeights make_weights(const std::vector<SliceAnchor>& anchors, const WeightScheme& scheme);

/// Residual vector: sqrt(w_j) (mid_j - model price_j) per quote. Its squared
/// norm is the weighted least-squares objective.
Eigen::VectorXd global_objective(const GlobalParams& p, const std::vector<SliceAnchor>& anchors,
                                 const QuoteWeights& weights);

enum class GlobalInit { RobustSeed, LessDataDriven };

struct GlobalDiagnostics {
    int n_evals;
    std::string stop_reason;
    double initial_cost;
    double final_cost;
    int n_capped_weights;
};

struct GlobalResult {
    std::vector<EssviSlice> slices;
    GlobalDiagnostics diagnostics;
};

/// Bound-constrained least squares over the rectangular box. For RobustSeed
/// pass the robust calibrator's slices as seed; LessDataDriven starts from
/// rho = 0, a_i = max(theta*_i - theta*_{i-1}, 0), c_i = 0.5.
GlobalResult calibrate_global(const std::vector<SliceAnchor>& anchors, const WeightScheme& scheme,
                              GlobalInit init, const std::vector<EssviSlice>& seed_slices = {},
                              int budget = 500);

}  // namespace essvi
