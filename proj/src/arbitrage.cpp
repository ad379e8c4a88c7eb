#include "essvi/arbitrage.hpp"

#include <algorithm>
#include <cmath>

#include "essvi/errors.hpp"

namespace essvi {

namespace {

// Equality tests on region boundaries use a relative tolerance on the
// squared-difference expressions: the tangency/crossing distinction is
// measure-zero and must be reachable from exact inputs.
constexpr double kRelTol = 1e-10;

bool approx_eq(double a, double b, double scale) {
    return std::abs(a - b) <= kRelTol * std::max({std::abs(a), std::abs(b), scale});
}

// Stable real roots of c2 x^2 + c1 x + c0 with known nonnegative discriminant.
std::array<double, 2> quadratic_roots(double c2, double c1, double c0, double disc) {
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
    double r1, r2;
    if (q != 0.0) {
        r1 = q / c2;
        r2 = c0 / q;
    } else {  // c1 == 0 and disc == 0
        r1 = r2 = 0.0;
    }
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

}  // namespace

const char* to_string(PairVerdict v) {
    switch (v) {
        case PairVerdict::NoArbStrict: return "no_arb_strict";
        case PairVerdict::NoArbWithTangency: return "no_arb_tangency";
        case PairVerdict::OneCrossing: return "one_crossing";
        case PairVerdict::TwoCrossings: return "two_crossings";
        case PairVerdict::ArbitrageAtOrigin: return "arbitrage_at_origin";
        case PairVerdict::ArbitrageGeneric: return "arbitrage_generic";
    }
    return "?";
}

ButterflyResult butterfly_check(const EssviSlice& s) {
    const double one_abs = 1.0 + std::abs(s.rho);
    const double b1 = s.psi * one_abs;
    const double b2 = s.psi * s.psi * one_abs;
    const double rhs = 4.0 * s.theta;
    // the B2 equality case must be reachable from decimal inputs, so the
    // weak inequality gets one part in 1e12 of slack
    return {b1 < 4.0 && b2 <= rhs * (1.0 + 1e-12), b1, b2, rhs};
}

std::array<double, 3> q_coefficients(const PairGeometry& g) {
    const double T = g.Theta, P = g.Phi, r1 = g.rho1, r2 = g.rho2;
    const double TP = T * P;
    const double E = TP * r2 - r1;

    const double c2 = (E * E - (TP - 1.0) * (TP - 1.0)) * ((TP + 1.0) * (TP + 1.0) - E * E);
    const double c1 =
        4.0 * T *
        (r1 * (-TP * TP + (T - 2.0) * T * r2 * r2 * P * P + 2.0 * T * P * P - 1.0) +
         r2 * P * (T * T * r2 * r2 * P * P - T * T * P * P + 2.0 * T - 1.0) +
         (1.0 - 2.0 * T) * r2 * r1 * r1 * P + r1 * r1 * r1);
    const double c0 = 4.0 * (T - 1.0) * T * (T * P * P * r2 * r2 - T * P * P - r1 * r1 + 1.0);
    return {c2, c1, c0};
}

double q_discriminant(const PairGeometry& g) {
    const double T = g.Theta, P = g.Phi, r1 = g.rho1, r2 = g.rho2;
    const double TP = T * P;
    const double E = TP * r2 - r1;
    if (approx_eq(E * E, (TP - 1.0) * (TP - 1.0), 0.0) ||
        approx_eq(E * E, (TP + 1.0) * (TP + 1.0), 0.0))
        throw DegenerateQuadratic("Q(x) is not of second degree");
    const double h = r1 * r1 - TP * TP * r2 * r2 + TP * TP - 1.0;
    return 16.0 * T * h * h * (E * E - (T - 1.0) * (T * P * P - 1.0));
}

RootClassification classify_root(const PairGeometry& g, double x, double tol) {
    const auto [c2, c1, c0] = q_coefficients(g);
    const double q = (c2 * x + c1) * x + c0;
    const double scale = std::abs(c2 * x * x) + std::abs(c1 * x) + std::abs(c0) + 1e-300;
    if (std::abs(q) > tol * scale) throw NotARoot("Q residual exceeds tolerance");

    const double E = g.Theta * g.Phi * g.rho2 - g.rho1;
    const double alpha = g.Theta - 1.0 + E * x;
    const double z1 = std::sqrt(x * x + 2.0 * g.rho1 * x + 1.0);
    const double z2 = std::sqrt(g.Phi * g.Phi * x * x + 2.0 * g.rho2 * g.Phi * x + 1.0);
    const double Z = z1 * z1 - alpha * alpha - g.Theta * g.Theta * z2 * z2;

    const double side = alpha + g.Theta * z2;
    const double side_scale = std::abs(alpha) + g.Theta * z2 + z1 + 1e-300;
    RootType type = RootType::A;
    if (std::abs(side - z1) <= tol * side_scale)
        type = RootType::C;
    else if (std::abs(side + z1) <= tol * side_scale)
        type = RootType::B;
    return {type, alpha, z1, z2, Z};
}

PairClassification classify_pair(const EssviSlice& near_slice, const EssviSlice& far_slice) {
    if (!(near_slice.theta > 0.0) || !(far_slice.theta > 0.0))
        throw InvalidPair("slice theta must be positive");

    const double th1 = near_slice.theta, th2 = far_slice.theta;
    const double phi1 = near_slice.phi(), phi2 = far_slice.phi();
    const double r1 = near_slice.rho, r2 = far_slice.rho;

    PairClassification out{};
    out.theta_margin = th2 / th1 - std::max(1.0, (1.0 - r1 * r1) / (1.0 - r2 * r2));

    // Flat-slice cases are handled before the ratios are formed.
    if (phi1 == 0.0 && phi2 == 0.0) {
        out.slope_lower_margin = out.slope_upper_margin = 0.0;
        if (approx_eq(th2, th1, 0.0)) {
            out.verdict = PairVerdict::NoArbStrict;
            out.identical_slices = true;
        } else {
            out.verdict = th2 > th1 ? PairVerdict::NoArbStrict : PairVerdict::ArbitrageGeneric;
        }
        return out;
    }
    if (phi1 == 0.0) {  // w1 constant, w2 a genuine smile
        out.slope_lower_margin = out.slope_upper_margin = 0.0;
        const double far_min = minimum_variance(far_slice);
        if (approx_eq(far_min, th1, th1)) {
            out.verdict = PairVerdict::NoArbWithTangency;
            out.intersections.push_back({0.0, minimum_location(far_slice), IntersectionKind::Tangency});
        } else {
            out.verdict = far_min > th1 ? PairVerdict::NoArbStrict : PairVerdict::ArbitrageGeneric;
        }
        return out;
    }
    if (phi2 == 0.0) {  // w1 unbounded above a constant w2
        out.slope_lower_margin = out.slope_upper_margin = 0.0;
        out.verdict = PairVerdict::ArbitrageGeneric;
        return out;
    }

    const double T = th2 / th1;
    const double P = phi2 / phi1;
    const double TP = T * P;
    const double E = TP * r2 - r1;
    out.slope_lower_margin = E - (1.0 - TP);
    out.slope_upper_margin = (TP - 1.0) - E;

    if (approx_eq(th1, th2, 0.0) && approx_eq(r1, r2, 1.0) &&
        approx_eq(near_slice.psi, far_slice.psi, near_slice.psi)) {
        out.verdict = PairVerdict::NoArbStrict;
        out.identical_slices = true;
        return out;
    }

    if (th2 < th1 * (1.0 - kRelTol)) {
        // w2(0) < w1(0)
        out.verdict = PairVerdict::ArbitrageAtOrigin;
        return out;
    }

    if (approx_eq(th2, th1, 0.0)) {
        // Theta = 1: the slices meet at the origin; no arbitrage iff
        // (i) rho1 = rho2 = 0 and Phi >= 1, or (ii) Phi = rho1/rho2 with
        // rho1^2 >= rho2^2. Either way the contact at k = 0 is a tangency.
        const bool case_i =
            std::abs(r1) <= kRelTol && std::abs(r2) <= kRelTol && P >= 1.0 - kRelTol;
        const bool case_ii = approx_eq(P * r2, r1, 1.0) && r1 * r1 >= r2 * r2 * (1.0 - kRelTol);
        if (case_i || case_ii) {
            if (approx_eq(P, 1.0, 0.0) && approx_eq(r1, r2, 1.0)) {
                out.verdict = PairVerdict::NoArbStrict;
                out.identical_slices = true;
            } else {
                out.verdict = PairVerdict::NoArbWithTangency;
                out.intersections.push_back({0.0, 0.0, IntersectionKind::Tangency});
            }
        } else {
            out.verdict = PairVerdict::ArbitrageAtOrigin;
            const bool slope_mismatch = !approx_eq(P * r2, r1, 1.0);
            out.intersections.push_back({0.0, 0.0,
                                         slope_mismatch ? IntersectionKind::Crossing
                                                        : IntersectionKind::Tangency});
        }
        return out;
    }

    // Theta > 1 from here on.
    const double s = E * E;
    const double u = (TP - 1.0) * (TP - 1.0);
    const double d = (T - 1.0) * (T * P * P - 1.0);

    const bool eq4_upper = s <= u || approx_eq(s, u, 0.0);
    if (TP < 1.0 - kRelTol || !eq4_upper) {
        out.verdict = PairVerdict::ArbitrageGeneric;
        return out;
    }

    const bool on_upper_boundary = approx_eq(s, u, 0.0);
    const bool phi_leq_one = P <= 1.0 + kRelTol;

    if (on_upper_boundary) {
        if (phi_leq_one) {
            out.verdict = PairVerdict::NoArbStrict;
            return out;
        }
        // One crossing where one pair of asymptotes coincides. On the
        // boundary Q(x) collapses; the root has the closed form below, with
        // the branch picked by the sign of (TP rho2 - rho1).
        const double pm = (E <= 0.0) ? 1.0 : -1.0;
        const double x = ((T - 1.0) * (T - 1.0) * P * r2 + pm * (T - 1.0) * (TP + P - 2.0)) /
                         (2.0 * (P - 1.0) * (TP - 1.0));
        out.verdict = PairVerdict::OneCrossing;
        out.intersections.push_back({x, x / phi1, IntersectionKind::Crossing});
        return out;
    }

    if (phi_leq_one || s < d * (1.0 - kRelTol)) {
        out.verdict = PairVerdict::NoArbStrict;
        return out;
    }

    const auto [c2, c1, c0] = q_coefficients({T, P, r1, r2});

    if (approx_eq(s, d, 0.0)) {
        out.verdict = PairVerdict::NoArbWithTangency;
        const double x = -0.5 * c1 / c2;
        out.intersections.push_back({x, x / phi1, IntersectionKind::Tangency});
        return out;
    }

    // d < s < u with Phi > 1: exactly two crossings.
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    const auto roots = quadratic_roots(c2, c1, c0, disc);
    out.verdict = PairVerdict::TwoCrossings;
    out.intersections.push_back({roots[0], roots[0] / phi1, IntersectionKind::Crossing});
    out.intersections.push_back({roots[1], roots[1] / phi1, IntersectionKind::Crossing});
    return out;
}

}  // namespace essvi
