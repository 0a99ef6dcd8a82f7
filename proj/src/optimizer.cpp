#include "gasvar/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gasvar::optim {

namespace {

double safe_eval(const Objective& f, const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x, double step) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd grad(n);
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        probe[i] = x[i] + step;
        const double up = safe_eval(f, probe);
        probe[i] = x[i] - step;
        const double down = safe_eval(f, probe);
        probe[i] = x[i];
        if (std::isfinite(up) && std::isfinite(down)) {
            grad[i] = (up - down) / (2.0 * step);
        } else {
            // One-sided fallback at the edge of the feasible region.
            const double centre = safe_eval(f, x);
            if (std::isfinite(up)) {
                grad[i] = (up - centre) / step;
            } else if (std::isfinite(down)) {
                grad[i] = (centre - down) / step;
            } else {
                grad[i] = 0.0;
            }
        }
    }
    return grad;
}

Eigen::MatrixXd central_hessian(const Objective& f, const Eigen::VectorXd& x, double step) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd probe = x;
    const double centre = f(x);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            double value = 0.0;
            if (i == j) {
                probe[i] = x[i] + step;
                const double up = f(probe);
                probe[i] = x[i] - step;
                const double down = f(probe);
                value = (up - 2.0 * centre + down) / (step * step);
            } else {
                auto at = [&](double di, double dj) {
                    probe[i] = x[i] + di;
                    probe[j] = x[j] + dj;
                    const double v = f(probe);
                    probe[i] = x[i];
                    probe[j] = x[j];
                    return v;
                };
                value = (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) / (4.0 * step * step);
            }
            probe[i] = x[i];
            hess(i, j) = value;
            hess(j, i) = value;
        }
    }
    return hess;
}

BfgsResult minimize_bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& options) {
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxHalvings = 50;

    const Eigen::Index n = x0.size();
    BfgsResult result;
    result.x = x0;
    result.value = safe_eval(f, x0);
    if (!std::isfinite(result.value)) {
        result.gradient = Eigen::VectorXd::Zero(n);
        result.reason = StopReason::NonFiniteStart;
        return result;
    }
    result.gradient = central_gradient(f, result.x, options.fd_step);

    Eigen::MatrixXd inv_hess = Eigen::MatrixXd::Identity(n, n);
    bool fresh_hessian = true;
    int small_steps = 0;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        result.iterations = iter;
        if (result.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            result.reason = StopReason::Gradient;
            break;
        }

        Eigen::VectorXd direction = -inv_hess * result.gradient;
        double slope = result.gradient.dot(direction);
        if (!(slope < 0.0)) {
            inv_hess.setIdentity();
            fresh_hessian = true;
            direction = -result.gradient;
            slope = result.gradient.dot(direction);
        }

        double step = 1.0;
        const double longest = direction.lpNorm<Eigen::Infinity>();
        if (longest > options.max_step) {
            step = options.max_step / longest;
        }

        Eigen::VectorXd trial;
        double trial_value = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int k = 0; k < kMaxHalvings; ++k) {
            trial = result.x + step * direction;
            trial_value = safe_eval(f, trial);
            if (trial_value <= result.value + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }

        if (!accepted) {
            if (!fresh_hessian) {
                inv_hess.setIdentity();
                fresh_hessian = true;
                continue;
            }
            result.reason = StopReason::LineSearch;
            break;
        }

        const Eigen::VectorXd new_gradient = central_gradient(f, trial, options.fd_step);
        const Eigen::VectorXd s = trial - result.x;
        const Eigen::VectorXd y = new_gradient - result.gradient;
        const double improvement = result.value - trial_value;
        const double previous = result.value;

        result.x = trial;
        result.value = trial_value;
        result.gradient = new_gradient;
        result.iterations = iter + 1;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (fresh_hessian) {
                // Rescale the identity before the first update.
                inv_hess *= sy / y.squaredNorm();
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
            inv_hess = left * inv_hess * left.transpose() + rho * s * s.transpose();
            fresh_hessian = false;
        }

        if (result.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            result.reason = StopReason::Gradient;
            break;
        }
        // Two consecutive negligible decreases.
        small_steps = improvement <= options.relative_tolerance * std::max(std::abs(previous), 1e-12) ? small_steps + 1 : 0;
        if (small_steps >= 2) {
            result.reason = StopReason::RelativeImprovement;
            break;
        }
        if (iter + 1 == options.max_iterations) {
            result.reason = StopReason::MaxIterations;
        }
    }
    result.converged = result.gradient.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance;
    return result;
}

}  // namespace gasvar::optim
