#pragma once

#include "gasvar/dist.hpp"
#include "gasvar/optimizer.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gasvar {

/// GAS(1,1) model for the log-scale theta_t = log sigma_t:
///
///   theta_{t+1} = kappa + A * s_t + B * theta_t
///
/// where s_t is the score of the conditional log density with respect to
/// theta_t. Location, skewness and tail parameters are static.
struct GasModel {
    Family family = Family::NORM;
    double kappa = 0.0;
    double a_coef = 0.0;
    double b_coef = 0.0;
    double mu = 0.0;
    double xi = 1.0;
    double nu = kInfiniteNu;

    /// Conditional distribution at log-scale `theta`.
    [[nodiscard]] DistParams params_at(double theta) const { return {family, mu, std::exp(theta), xi, nu}; }
    /// kappa / (1 - B), the stationary mean of theta.
    [[nodiscard]] double unconditional_theta() const { return kappa / (1.0 - b_coef); }
};

/// Throws DomainError unless |B| < 1, A >= 0 and the shape parameters are valid for the family.
void validate(const GasModel& model);

struct FilterOutput {
    std::vector<double> theta_path;  ///< theta_1 .. theta_T
    std::vector<double> score_path;  ///< s_1 .. s_T
    double loglik = 0.0;
    double theta_next = 0.0;         ///< theta_{T+1}
};

/// Runs the recursion from theta_1 = kappa / (1 - B). Throws ExplosiveFilterError
/// if theta leaves the finite range.
[[nodiscard]] FilterOutput filter_path(std::span<const double> returns, const GasModel& model);

/// Log-likelihood only; NaN when the recursion explodes. No allocation.
[[nodiscard]] double log_likelihood(std::span<const double> returns, const GasModel& model) noexcept;

struct SimulatedPath {
    std::vector<double> returns;
    std::vector<double> theta_path;
};

/// Draws r_t from the conditional distribution at theta_t, then advances theta.
/// Draw t uses counter t of CounterRng(seed).
[[nodiscard]] SimulatedPath simulate_path(const GasModel& model, std::size_t length, std::uint64_t seed);

struct EstimateOptions {
    std::size_t min_length = 100;
    optim::BfgsOptions optimizer{};
    /// Adds two perturbed starting points to the default one.
    bool restarts = true;
    /// Extra starting points, e.g. the optimum of a nested family. Fields
    /// pinned by the target family are overridden; an infinite nu is mapped to
    /// a very large finite value.
    std::vector<GasModel> warm_starts;
    bool standard_errors = false;
};

struct FitResult {
    GasModel model;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> theta_path;
    double theta_next = 0.0;
    /// In the order kappa, A, B, mu, then nu (STD, SSTD) and xi (SSTD).
    std::optional<std::vector<double>> standard_errors;
    std::size_t n_obs = 0;
};

/// Maximum likelihood over the unconstrained transform
/// (kappa, log A, atanh B, mu, log(nu - 2), log xi), best of a fixed set of starts.
/// Non-convergence is reported in the result; degenerate input throws EstimationError.
[[nodiscard]] FitResult estimate(std::span<const double> returns, Family family, const EstimateOptions& options = {});

namespace detail {
/// Number of free parameters for a family (4, 5 or 6).
[[nodiscard]] int free_parameter_count(Family family) noexcept;
[[nodiscard]] Eigen::VectorXd to_unconstrained(const GasModel& model);
[[nodiscard]] GasModel from_unconstrained(const Eigen::VectorXd& x, Family family);
}  // namespace detail

}  // namespace gasvar
