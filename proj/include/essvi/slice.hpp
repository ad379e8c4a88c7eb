#pragma once

#include <cmath>
#include <utility>

namespace essvi {

/// One maturity slice of an eSSVI total-variance surface.
///
/// theta is the ATM total implied variance, rho the skew correlation and
/// psi = theta * phi the product of ATM variance and curvature. The slice
/// with psi = 0 is admitted and is the constant smile w(k) = theta.
struct EssviSlice {
    double theta;     // ATM total implied variance, > 0
    double rho;       // skew correlation, |rho| < 1
    double psi;       // theta * phi, >= 0
    double maturity;  // year fraction, > 0

    double phi() const { return psi / theta; }

    bool valid() const {
        return theta > 0.0 && psi >= 0.0 && std::abs(rho) < 1.0 && maturity > 0.0 &&
               std::isfinite(theta) && std::isfinite(psi) && std::isfinite(rho);
    }
};

/// Total implied variance w(k) at log-moneyness k = ln(K/F).
inline double total_variance(const EssviSlice& s, double k) {
    const double phi = s.psi / s.theta;
    const double u = phi * k + s.rho;
    return 0.5 * s.theta * (1.0 + s.rho * phi * k + std::sqrt(u * u + (1.0 - s.rho * s.rho)));
}

/// First and second derivative of w with respect to k.
///
/// A flat slice (psi = 0) returns (0, 0).
inline std::pair<double, double> variance_derivatives(const EssviSlice& s, double k) {
    const double phi = s.psi / s.theta;
    if (phi == 0.0) return {0.0, 0.0};
    const double z = std::sqrt(phi * phi * k * k + 2.0 * phi * s.rho * k + 1.0);
    const double w1 = 0.5 * s.theta * phi * ((k * phi + s.rho) / z + s.rho);
    const double w2 = 0.5 * s.theta * (1.0 - s.rho * s.rho) * phi * phi / (z * z * z);
    return {w1, w2};
}

/// Slopes of the asymptotes of 2 w(k): left slope (in |k|) first, then right.
inline std::pair<double, double> asymptote_slopes(const EssviSlice& s) {
    return {s.psi * (1.0 - s.rho), s.psi * (1.0 + s.rho)};
}

/// Location of the slice minimum, k = -2 rho / phi; the flat or symmetric
/// slice has its minimum at 0.
inline double minimum_location(const EssviSlice& s) {
    const double phi = s.psi / s.theta;
    if (phi == 0.0) return 0.0;
    return -2.0 * s.rho / phi;
}

/// Value at the minimum, theta (1 - rho^2).
inline double minimum_variance(const EssviSlice& s) {
    return s.theta * (1.0 - s.rho * s.rho);
}

}  // namespace essvi
