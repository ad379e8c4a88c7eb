#pragma once

#include <array>
#include <vector>

#include "essvi/slice.hpp"

namespace essvi {

/// Butterfly conditions for a single slice:
///   B1: psi (1 + |rho|) < 4
///   B2: psi^2 (1 + |rho|) <= 4 theta
struct ButterflyResult {
    bool pass;
    double b1_lhs;  // psi (1 + |rho|), must be < 4
    double b2_lhs;  // psi^2 (1 + |rho|), must be <= 4 theta
    double b2_rhs;  // 4 theta
};

ButterflyResult butterfly_check(const EssviSlice& slice);

/// Shape ratios of a consecutive slice pair: Theta = theta2/theta1,
/// Phi = phi2/phi1, with the correlations of near (1) and far (2) slices.
struct PairGeometry {
    double Theta;
    double Phi;
    double rho1;
    double rho2;

    bool valid() const {
        return Theta > 0.0 && Phi > 0.0 && std::abs(rho1) < 1.0 && std::abs(rho2) < 1.0;
    }
};

enum class PairVerdict {
    NoArbStrict,
    NoArbWithTangency,
    OneCrossing,
    TwoCrossings,
    ArbitrageAtOrigin,
    ArbitrageGeneric,
};

const char* to_string(PairVerdict v);

enum class IntersectionKind { Tangency, Crossing };

struct Intersection {
    double x;  // phi1-scaled units, x = phi1 * k
    double k;  // log-moneyness
    IntersectionKind kind;
};

struct PairClassification {
    PairVerdict verdict;
    std::vector<Intersection> intersections;
    bool identical_slices = false;

    // margins of the necessary conditions, reported even on failure
    double theta_margin;        // Theta - max{1, (1-rho1^2)/(1-rho2^2)}
    double slope_lower_margin;  // (ThetaPhi rho2 - rho1) - (1 - ThetaPhi)
    double slope_upper_margin;  // (ThetaPhi - 1) - (ThetaPhi rho2 - rho1)

    bool no_arbitrage() const {
        return verdict == PairVerdict::NoArbStrict || verdict == PairVerdict::NoArbWithTangency;
    }
};

/// Coefficients (c2, c1, c0) of the quadratic factor Q(x) of the quartic
/// P(x) = x^2 Q(x) whose roots locate candidate intersection points.
std::array<double, 3> q_coefficients(const PairGeometry& g);

/// Discriminant of Q(x) in factored form,
///   D = 16 Theta (rho1^2 - T^2P^2 rho2^2 + T^2P^2 - 1)^2
///       [ (TP rho2 - rho1)^2 - (Theta-1)(Theta Phi^2 - 1) ]
/// with TP = Theta Phi. Throws DegenerateQuadratic when c2 = 0.
double q_discriminant(const PairGeometry& g);

/// Full calendar-spread classification of a consecutive slice pair.
/// near_slice is the shorter maturity.
PairClassification classify_pair(const EssviSlice& near_slice, const EssviSlice& far_slice);

enum class RootType { A, B, C };

/// Sign-pattern classification of a root x of Q. Only type C roots are
/// genuine intersection points of the two slices.
struct RootClassification {
    RootType type;
    double alpha;
    double z1;
    double z2;
    double Z;  // z1^2 - alpha^2 - Theta^2 z2^2
};

RootClassification classify_root(const PairGeometry& g, double x, double tol = 1e-6);

}  // namespace essvi
