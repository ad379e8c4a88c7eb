#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace essvi {

struct LsqOptions {
    int max_evals = 500;  // residual-vector evaluations, Jacobian included
    double ftol = 1e-8;
    double xtol = 1e-8;
    double gtol = 1e-8;
};

struct LsqResult {
    Eigen::VectorXd x;
    double cost;  // 0.5 * ||r||^2 convention is NOT used; cost = ||r||^2
    int n_evals;
    std::string reason;  // "ftol", "xtol", "gtol" or "budget"
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Dense Levenberg-Marquardt with simple bound constraints: trial steps are
/// projected onto [lb, ub], the Jacobian is a forward difference that flips
/// direction at the upper bound. Deterministic for identical inputs.
LsqResult least_squares_box(const ResidualFn& fn, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& lb, const Eigen::VectorXd& ub,
                            const LsqOptions& opts = {});

}  // namespace essvi
