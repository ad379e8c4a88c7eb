#include "essvi/robust_calib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "essvi/black_scholes.hpp"
#include "essvi/brent.hpp"
#include "essvi/errors.hpp"

namespace essvi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRhoEdge = 1e-9;  // refinement intervals stay inside (-1, 1)
}  // namespace

BoundSet psi_bounds(const SliceAnchor& anchor, const PrevSlice* prev, double rho) {
    const double k = anchor.k_star;
    const double ts = anchor.theta_star;
    const double one_abs = 1.0 + std::abs(rho);

    const double pk = prev ? prev->k_star : 0.0;
    const double pts = prev ? prev->theta_star : 0.0;
    const double prho = prev ? prev->rho : 0.0;
    const double ppsi = prev ? prev->psi : 0.0;

    BoundSet b{};
    b.B1 = 4.0 / one_abs;
    const double shift = -2.0 * rho * k / one_abs;
    const double root = std::sqrt(4.0 * rho * rho * k * k / (one_abs * one_abs) + 4.0 * ts / one_abs);
    b.B2_minus = shift - root;
    b.B2_plus = shift + root;

    const double rk = rho * k;
    b.B3 = (rk != 0.0) ? (ts - pts + prho * ppsi * pk) / rk : kInf;
    b.B4 = prev ? ppsi * std::max((1.0 + prho) / (1.0 + rho), (1.0 - prho) / (1.0 - rho)) : 0.0;

    if (!prev) {
        b.B5 = kInf;  // R4 has no predecessor; the formula is 0/0 here
    } else {
        const double den = pts - ppsi * (prho * pk - rk);
        b.B5 = (den != 0.0) ? ppsi * ts / den : kInf;
    }

    if (rk > 0.0) {
        b.L = std::max(b.B2_minus, b.B4);
        b.U = std::min({b.B1, b.B2_plus, b.B3, b.B5});
    } else if (rk < 0.0) {
        b.L = std::max({b.B2_minus, b.B3, b.B4});
        b.U = (b.B5 > 0.0) ? std::min({b.B1, b.B2_plus, b.B5}) : std::min(b.B1, b.B2_plus);
    } else {
        b.L = b.B4;
        b.U = std::min({b.B1, b.B2_plus, b.B5});
        if (ts < pts - prho * ppsi * pk) {  // first inequality of R3 unattainable
            b.feasible = false;
            return b;
        }
    }
    b.feasible = b.L <= b.U;
    return b;
}

double slice_objective(const SliceAnchor& anchor, double rho, double psi) {
    const double theta = anchor.theta_star - rho * psi * anchor.k_star;
    if (!(theta > 0.0)) return kInf;
    const EssviSlice s{theta, rho, psi, anchor.maturity};
    double sum = 0.0;
    for (const auto& q : anchor.quotes) {
        const double w = total_variance(s, q.k);
        const double model = price({anchor.forward, q.strike, anchor.rate, anchor.maturity, w, q.is_call});
        sum += std::abs(q.mid - model);
    }
    return sum;
}

namespace {

struct RhoEval {
    double rho = 0.0;
    double psi = 0.0;
    double score = kInf;
    BoundSet bounds{};
};

RhoEval evaluate_rho(const SliceAnchor& anchor, const PrevSlice* prev, double rho,
                     const RobustConfig& cfg, int& evals) {
    RhoEval ev;
    ev.rho = rho;
    ev.bounds = psi_bounds(anchor, prev, rho);
    if (!ev.bounds.feasible) return ev;

    // R1 and the box are open: inset both ends.
    const double inset = 1e-12 * std::max(1.0, std::abs(ev.bounds.U - ev.bounds.L));
    const double lo = ev.bounds.L + inset;
    const double hi = ev.bounds.U - inset;
    if (!(lo < hi)) {
        ev.psi = 0.5 * (ev.bounds.L + ev.bounds.U);
        ev.score = slice_objective(anchor, rho, ev.psi);
        ++evals;
        return ev;
    }
    auto result = minimize_bounded([&](double psi) { return slice_objective(anchor, rho, psi); },
                                   lo, hi, cfg.inner_xtol, cfg.max_inner_evals);
    evals += result.evals;
    ev.psi = result.x;
    ev.score = result.f;
    return ev;
}

}  // namespace

RobustResult calibrate_robust(const std::vector<SliceAnchor>& anchors, const RobustConfig& cfg) {
    RobustResult out;
    PrevSlice prev{};
    bool have_prev = false;

    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const SliceAnchor& anchor = anchors[i];
        const PrevSlice* prev_ptr = have_prev ? &prev : nullptr;

        if (have_prev && anchor.k_star == 0.0 && prev.k_star == 0.0 &&
            anchor.theta_star < prev.theta_star - prev.rho * prev.psi * prev.k_star) {
            throw AnchorInconsistent("theta* decreased with k* = 0 at consecutive maturities");
        }

        int evals = 0;
        RhoEval best;
        bool any_feasible = false;

        auto scan = [&](double lo, double hi) {
            const double step = (hi - lo) / cfg.r;
            for (int j = 0; j < cfg.r; ++j) {
                const double rho = lo + (j + 0.5) * step;
                RhoEval ev = evaluate_rho(anchor, prev_ptr, rho, cfg, evals);
                if (ev.bounds.feasible) any_feasible = true;
                if (ev.score < best.score) best = ev;
            }
        };

        scan(-1.0, 1.0);
        if (!any_feasible) throw AllRhoInfeasible(static_cast<int>(i));

        int zeta = 0;
        while (2.0 * 1.2 * std::pow(cfg.r, -zeta) >= cfg.epsilon) {
            ++zeta;
            const double half = 1.2 * std::pow(cfg.r, -zeta);
            const double lo = std::max(best.rho - half, -1.0 + kRhoEdge);
            const double hi = std::min(best.rho + half, 1.0 - kRhoEdge);
            scan(lo, hi);
        }

        const double theta = anchor.theta_star - best.rho * best.psi * anchor.k_star;
        out.slices.push_back({theta, best.rho, best.psi, anchor.maturity});
        out.diagnostics.push_back(
            {evals, best.bounds.L, best.bounds.U, best.rho, best.psi, best.score});

        prev = {anchor.k_star, anchor.theta_star, best.rho, best.psi};
        have_prev = true;
    }
    return out;
}

}  // namespace essvi
