#include "essvi/lsq.hpp"

#include <algorithm>
#include <cmath>

namespace essvi {

namespace {

Eigen::VectorXd clamp_to_box(Eigen::VectorXd x, const Eigen::VectorXd& lb,
                             const Eigen::VectorXd& ub) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lb[i], ub[i]);
    return x;
}

// Infinity norm of the gradient projected onto the feasible directions.
double projected_gradient_norm(const Eigen::VectorXd& g, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& lb, const Eigen::VectorXd& ub) {
    double norm = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double gi = g[i];
        if (x[i] <= lb[i] && gi > 0.0) gi = 0.0;
        if (x[i] >= ub[i] && gi < 0.0) gi = 0.0;
        norm = std::max(norm, std::abs(gi));
    }
    return norm;
}

}  // namespace

LsqResult least_squares_box(const ResidualFn& fn, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& lb, const Eigen::VectorXd& ub,
                            const LsqOptions& opts) {
    const Eigen::Index n = x0.size();
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return fn(x);
    };

    Eigen::VectorXd x = clamp_to_box(x0, lb, ub);
    Eigen::VectorXd r = eval(x);
    double cost = r.squaredNorm();

    double lambda = 1e-3;
    std::string reason = "budget";

    while (evals < opts.max_evals) {
        // forward-difference Jacobian, stepping away from the nearer bound
        Eigen::MatrixXd J(r.size(), n);
        const double sqrt_eps = std::sqrt(2.2e-16);
        bool jacobian_done = true;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (evals >= opts.max_evals) {
                jacobian_done = false;
                break;
            }
            double h = sqrt_eps * std::max(std::abs(x[j]), 1e-8);
            if (x[j] + h > ub[j]) h = -h;
            Eigen::VectorXd xh = x;
            xh[j] += h;
            J.col(j) = (eval(xh) - r) / h;
        }
        if (!jacobian_done) break;

        const Eigen::VectorXd g = J.transpose() * r;
        if (projected_gradient_norm(2.0 * g, x, lb, ub) < opts.gtol) {
            reason = "gtol";
            break;
        }

        const Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd diag = JtJ.diagonal().cwiseMax(1e-12);

        bool stepped = false;
        while (evals < opts.max_evals) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal() += lambda * diag;
            const Eigen::VectorXd delta = A.ldlt().solve(-g);
            const Eigen::VectorXd x_new = clamp_to_box(x + delta, lb, ub);
            const Eigen::VectorXd step = x_new - x;
            if (step.norm() < opts.xtol * (x.norm() + opts.xtol)) {
                reason = "xtol";
                return {x, cost, evals, reason};
            }
            const Eigen::VectorXd r_new = eval(x_new);
            const double cost_new = r_new.squaredNorm();
            if (cost_new < cost) {
                const double improvement = cost - cost_new;
                x = x_new;
                r = r_new;
                cost = cost_new;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (improvement <= opts.ftol * std::max(cost, 1e-300)) {
                    reason = "ftol";
                    return {x, cost, evals, reason};
                }
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e12) {
                reason = "xtol";  // no descent direction left at this scale
                return {x, cost, evals, reason};
            }
        }
        if (!stepped && evals >= opts.max_evals) break;
    }
    return {x, cost, evals, reason};
}

}  // namespace essvi
