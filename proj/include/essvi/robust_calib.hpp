#pragma once

#include <vector>

#include "essvi/pipeline.hpp"
#include "essvi/slice.hpp"

namespace essvi {

struct RobustConfig {
    int r = 100;                 // rho grid size per stage
    double epsilon = 1e-5;       // refinement stop width
    int max_inner_evals = 1000;  // budget of the 1D psi search
    double inner_xtol = 1e-8;
};

/// Calibrated state of the previous maturity, as the bound system needs it.
struct PrevSlice {
    double k_star;
    double theta_star;
    double rho;
    double psi;
};

/// The psi interval implied by constraints R0-R4 for a candidate rho.
struct BoundSet {
    double B1;
    double B2_minus;
    double B2_plus;
    double B3;  // only binding when rho k* != 0
    double B4;
    double B5;  // +inf at the first maturity
    double L;
    double U;
    bool feasible;  // L <= U and the rho k* = 0 side condition
};

/// Bounds for psi_i given the anchor, the previous calibrated slice (null at
/// the first maturity) and a candidate rho_i, resolved by the sign of
/// rho_i k*_i.
BoundSet psi_bounds(const SliceAnchor& anchor, const PrevSlice* prev, double rho);

/// Sum of absolute differences between observed mids and slice prices.
/// Returns +inf when theta = theta* - rho psi k* is nonpositive.
double slice_objective(const SliceAnchor& anchor, double rho, double psi);

struct SliceDiagnostics {
    int objective_evals;
    double L;
    double U;
    double rho;
    double psi;
    double objective;
};

struct RobustResult {
    std::vector<EssviSlice> slices;
    std::vector<SliceDiagnostics> diagnostics;
};

/// Sequential per-maturity calibration: rho grid search with geometric
/// refinement, bounded 1D psi minimization inside (L, U).
/// Throws AllRhoInfeasible when every grid rho at some maturity yields
/// L > U, AnchorInconsistent in the k*_{i-1} = k*_i = 0 dead end.
RobustResult calibrate_robust(const std::vector<SliceAnchor>& anchors,
                              const RobustConfig& config = {});

}  // namespace essvi
