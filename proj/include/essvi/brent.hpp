#pragma once

#include <cmath>
#include <utility>

namespace essvi {

struct ScalarMinResult {
    double x;
    double f;
    int evals;
    bool converged;
};

/// Bounded scalar minimization on [lo, hi] by golden-section with parabolic
/// interpolation steps. Stops when the bracket is within xtol of the current
/// minimizer or when the evaluation budget is exhausted.
template <class F>
ScalarMinResult minimize_bounded(F&& func, double lo, double hi, double xtol = 1e-8,
                                 int max_evals = 1000) {
    constexpr double golden = 0.3819660112501051;  // 2 - golden ratio
    constexpr double tiny = 1e-11;

    int evals = 0;
    auto eval = [&](double t) {
        ++evals;
        return func(t);
    };

    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = eval(x);
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    while (evals < max_evals) {
        const double m = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + tiny;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) return {x, fx, evals, true};

        bool use_golden = true;
        if (std::abs(e) > tol1) {
            // parabola through (v, fv), (w, fw), (x, fx)
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
                use_golden = false;
            }
        }
        if (use_golden) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }

        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = eval(u);

        if (fu <= fx) {
            if (u < x)
                b = x;
            else
                a = x;
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x)
                a = u;
            else
                b = u;
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return {x, fx, evals, false};
}

}  // namespace essvi
