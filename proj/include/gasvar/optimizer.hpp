#pragma once

#include <Eigen/Dense>

#include <functional>

namespace gasvar::optim {

/// Objective to minimize. May return +inf (or NaN) for infeasible points;
/// the line search backs away from them.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct BfgsOptions {
    int max_iterations = 1000;
    double gradient_tolerance = 1e-5;   ///< on the infinity norm
    double relative_tolerance = 1e-9;   ///< on the objective decrease, two steps in a row
    double fd_step = 1e-6;
    double max_step = 1.0;              ///< cap on any coordinate change in one line search trial
};

enum class StopReason { Gradient, RelativeImprovement, LineSearch, MaxIterations, NonFiniteStart };

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    StopReason reason = StopReason::MaxIterations;
    /// Final gradient infinity norm <= gradient_tolerance.
    bool converged = false;
};

Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x, double step);
Eigen::MatrixXd central_hessian(const Objective& f, const Eigen::VectorXd& x, double step);

/// Quasi-Newton minimization with finite-difference gradients and a backtracking Armijo line search.
BfgsResult minimize_bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& options = {});

}  // namespace gasvar::optim
