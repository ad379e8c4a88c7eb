#include "essvi/global_calib.hpp"

#include <algorithm>
#include <cmath>

#include "essvi/black_scholes.hpp"
#include "essvi/errors.hpp"
#include "essvi/lsq.hpp"

namespace essvi {

namespace {

// p_i = max{(1+rho_{i-1})/(1+rho_i), (1-rho_{i-1})/(1-rho_i)} so that
// psi_i >= psi_{i-1} p_i reproduces G3; always >= 1.
std::vector<double> growth_factors(const std::vector<double>& rho) {
    std::vector<double> p(rho.size(), 1.0);
    for (std::size_t i = 1; i < rho.size(); ++i)
        p[i] = std::max((1.0 + rho[i - 1]) / (1.0 + rho[i]),
                        (1.0 - rho[i - 1]) / (1.0 - rho[i]));
    return p;
}

double f_cap(double theta, double rho) {
    const double one_abs = 1.0 + std::abs(rho);
    return std::min(4.0 / one_abs, std::sqrt(4.0 * theta / one_abs));
}

// tail_i = min_{j >= i} f_j / prod_{l=i+1..j} p_l
std::vector<double> tail_mins(const std::vector<double>& f, const std::vector<double>& p) {
    std::vector<double> tail(f.size());
    tail.back() = f.back();
    for (std::size_t i = f.size() - 1; i-- > 0;) tail[i] = std::min(f[i], tail[i + 1] / p[i + 1]);
    return tail;
}

}  // namespace

std::vector<EssviSlice> expand_params(const GlobalParams& par,
                                      const std::vector<double>& maturities) {
    const std::size_t n = par.n();
    if (n == 0 || maturities.size() != n || par.a.size() + 1 != n || par.c.size() != n)
        throw Error("inconsistent global parameter dimensions");

    const auto p = growth_factors(par.rho);
    std::vector<double> theta(n);
    theta[0] = par.theta1;
    for (std::size_t i = 1; i < n; ++i) theta[i] = theta[i - 1] * p[i] + par.a[i - 1];

    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = f_cap(theta[i], par.rho[i]);
    const auto tail = tail_mins(f, p);

    std::vector<EssviSlice> slices(n);
    double psi_prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double A = (i == 0) ? 0.0 : psi_prev * p[i];
        const double C =
            (i == 0) ? tail[0] : std::min(psi_prev / theta[i - 1] * theta[i], tail[i]);
        if (!(C > A)) throw EmptyBox("psi interval collapsed");
        const double psi = A + par.c[i] * (C - A);
        slices[i] = {theta[i], par.rho[i], psi, maturities[i]};
        psi_prev = psi;
    }
    return slices;
}

namespace {

GlobalParams compress_impl(const std::vector<EssviSlice>& slices, bool project) {
    const std::size_t n = slices.size();
    if (n == 0) throw Error("no slices to compress");

    GlobalParams par;
    par.rho.resize(n);
    for (std::size_t i = 0; i < n; ++i) par.rho[i] = slices[i].rho;
    par.theta1 = slices[0].theta;

    const auto p = growth_factors(par.rho);
    const double a_floor = 1e-8 * par.theta1;
    par.a.resize(n - 1);
    std::vector<double> theta(n);
    theta[0] = par.theta1;
    for (std::size_t i = 1; i < n; ++i) {
        double a = slices[i].theta - theta[i - 1] * p[i];
        if (!(a > 0.0)) {
            if (!project) throw NotInBox("implied a_i <= 0");
            a = a_floor;
        }
        par.a[i - 1] = a;
        theta[i] = theta[i - 1] * p[i] + a;
    }

    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = f_cap(theta[i], par.rho[i]);
    const auto tail = tail_mins(f, p);

    par.c.resize(n);
    double psi_prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double A = (i == 0) ? 0.0 : psi_prev * p[i];
        const double C =
            (i == 0) ? tail[0] : std::min(psi_prev / theta[i - 1] * theta[i], tail[i]);
        if (!(C > A)) throw NotInBox("psi interval collapsed");
        double c = (slices[i].psi - A) / (C - A);
        if (!(c > 0.0 && c < 1.0)) {
            if (!project) throw NotInBox("implied c_i outside (0, 1)");
            c = std::clamp(c, 1e-6, 1.0 - 1e-6);
        }
        par.c[i] = c;
        // keep the forward recursion consistent with the projected value
        psi_prev = A + c * (C - A);
    }
    return par;
}

}  // namespace

GlobalParams compress_params(const std::vector<EssviSlice>& slices) {
    return compress_impl(slices, false);
}

GlobalParams compress_params_projected(const std::vector<EssviSlice>& slices) {
    return compress_impl(slices, true);
}

QuoteWeights make_weights(const std::vector<SliceAnchor>& anchors, const WeightScheme& scheme) {
    QuoteWeights out;
    for (const auto& a : anchors)
        for (const auto& q : a.quotes)
            out.w.push_back(scheme.kind == WeightScheme::Constant ? 1.0
                                                                  : 1.0 / (q.vega * q.vega));
    if (scheme.kind == WeightScheme::InverseVegaSquared && !out.w.empty()) {
        std::vector<double> sorted = out.w;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        const double cap = 1e8 * sorted[sorted.size() / 2];
        for (double& w : out.w) {
            if (w > cap) {
                w = cap;
                ++out.n_capped;
            }
        }
    }
    return out;
}

Eigen::VectorXd global_objective(const GlobalParams& p, const std::vector<SliceAnchor>& anchors,
                                 const QuoteWeights& weights) {
    std::vector<double> maturities;
    std::size_t n_quotes = 0;
    for (const auto& a : anchors) {
        maturities.push_back(a.maturity);
        n_quotes += a.quotes.size();
    }
    // The psi interval is strictly positive everywhere inside the box, but at
    // corners (every a_i on its floor, c_i ~ 1) it can be thinner than one
    // ulp and collapse in floating point. Trial points there get a huge
    // residual so the optimizer backs off instead of aborting.
    std::vector<EssviSlice> slices;
    try {
        slices = expand_params(p, maturities);
    } catch (const EmptyBox&) {
        return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_quotes), 1e10);
    }

    Eigen::VectorXd res(n_quotes);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const auto& a = anchors[i];
        for (const auto& q : a.quotes) {
            const double w = total_variance(slices[i], q.k);
            const double model = price({a.forward, q.strike, a.rate, a.maturity, w, q.is_call});
            res[idx] = std::sqrt(weights.w[idx]) * (q.mid - model);
            ++idx;
        }
    }
    return res;
}

namespace {

Eigen::VectorXd pack(const GlobalParams& p) {
    const std::size_t n = p.n();
    Eigen::VectorXd x(3 * n);
    for (std::size_t i = 0; i < n; ++i) x[i] = p.rho[i];
    x[n] = p.theta1;
    for (std::size_t i = 0; i + 1 < n; ++i) x[n + 1 + i] = p.a[i];
    for (std::size_t i = 0; i < n; ++i) x[2 * n + i] = p.c[i];
    return x;
}

GlobalParams unpack(const Eigen::VectorXd& x, std::size_t n) {
    GlobalParams p;
    p.rho.assign(x.data(), x.data() + n);
    p.theta1 = x[n];
    p.a.assign(x.data() + n + 1, x.data() + 2 * n);
    p.c.assign(x.data() + 2 * n, x.data() + 3 * n);
    return p;
}

}  // namespace

GlobalResult calibrate_global(const std::vector<SliceAnchor>& anchors, const WeightScheme& scheme,
                              GlobalInit init, const std::vector<EssviSlice>& seed_slices,
                              int budget) {
    if (anchors.empty()) throw InitInfeasible("no anchors");
    const std::size_t n = anchors.size();
    std::vector<double> maturities;
    for (const auto& a : anchors) maturities.push_back(a.maturity);

    GlobalParams p0;
    if (init == GlobalInit::RobustSeed) {
        if (seed_slices.size() != n) throw InitInfeasible("robust seed has wrong slice count");
        p0 = compress_params_projected(seed_slices);
    } else {
        if (!(anchors[0].theta_star > 0.0)) throw InitInfeasible("theta*_1 not positive");
        p0.rho.assign(n, 0.0);
        p0.theta1 = anchors[0].theta_star;
        p0.c.assign(n, 0.5);
        const double a_floor = 1e-8 * anchors[0].theta_star;
        for (std::size_t i = 1; i < n; ++i)
            p0.a.push_back(
                std::max(anchors[i].theta_star - anchors[i - 1].theta_star, a_floor));
    }

    const QuoteWeights weights = make_weights(anchors, scheme);

    Eigen::VectorXd lb(3 * n), ub(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        lb[i] = -1.0 + 1e-9;
        ub[i] = 1.0 - 1e-9;
    }
    lb[n] = 1e-12;
    ub[n] = 1e3;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lb[n + 1 + i] = 1e-12;
        ub[n + 1 + i] = 1e3;
    }
    for (std::size_t i = 0; i < n; ++i) {
        lb[2 * n + i] = 1e-9;
        ub[2 * n + i] = 1.0 - 1e-9;
    }

    auto residuals = [&](const Eigen::VectorXd& x) {
        return global_objective(unpack(x, n), anchors, weights);
    };

    LsqOptions opts;
    opts.max_evals = budget;
    const Eigen::VectorXd x0 = pack(p0);
    const double initial_cost = residuals(x0).squaredNorm();
    const LsqResult r = least_squares_box(residuals, x0, lb, ub, opts);

    GlobalResult out;
    out.slices = expand_params(unpack(r.x, n), maturities);
    out.diagnostics = {r.n_evals, r.reason, initial_cost, r.cost, weights.n_capped};
    return out;
}

}  // namespace essvi
