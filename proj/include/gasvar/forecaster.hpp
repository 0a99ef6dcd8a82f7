#pragma once

#include "gasvar/gas_filter.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gasvar {

enum class WindowType { MOVING, RECURSIVE };

[[nodiscard]] std::string_view to_string(WindowType w) noexcept;
[[nodiscard]] WindowType parse_window(std::string_view label);

struct RollConfig {
    std::size_t forecast_length = 0;  ///< H
    std::size_t refit_every = 1;
    WindowType window = WindowType::MOVING;
    /// Only 1 is supported by roll(); multi-step draws come from predict_h_step().
    std::size_t horizon = 1;
    std::vector<double> var_levels{0.01};
    std::size_t sim_draws = 10000;
    std::uint64_t seed = 0;
    /// Threads used for refits. Never changes the result.
    std::size_t workers = 1;
    double max_failure_fraction = 0.05;
    EstimateOptions estimation{};
};

/// Throws DomainError on an invalid configuration.
void validate(const RollConfig& cfg);

struct RollResult {
    std::vector<double> var_levels;
    /// var_forecasts[t][j]: VaR at var_levels[j] for out-of-sample step t.
    std::vector<std::vector<double>> var_forecasts;
    std::vector<DistParams> pred_params;
    std::vector<double> realized;
    std::size_t in_sample_length = 0;  ///< S = T - H

    /// Out-of-sample steps (0-based) at which a refit was scheduled, with the
    /// window it used and the resulting coefficients.
    std::vector<std::size_t> refit_indices;
    std::vector<std::size_t> refit_window_starts;
    std::vector<std::size_t> refit_window_lengths;
    std::vector<GasModel> refit_models;
    /// Scheduled refits that failed; the previous coefficients were reused.
    std::vector<std::size_t> failed_refits;
    std::vector<std::string> failure_messages;
    std::size_t nonconverged_refits = 0;
};

/// One-step-ahead predictive distribution after filtering `returns` with the fitted coefficients.
[[nodiscard]] DistParams predict_one_step(const FitResult& fit, std::span<const double> returns);

struct HorizonDraws {
    std::vector<double> draws;   ///< simulated returns at horizon h (exploded paths removed)
    std::size_t exploded = 0;
};

/// Monte-Carlo distribution of r_{T+h} for h >= 2, starting from fit.theta_next.
/// h == 1 is rejected: use predict_one_step.
[[nodiscard]] HorizonDraws predict_h_step(const FitResult& fit, std::size_t h, std::size_t sim_draws,
                                          std::uint64_t seed);

/// Linear-interpolation sample quantile (R type 7).
[[nodiscard]] double empirical_quantile(std::vector<double> values, double prob);

/// VaR at level alpha: the alpha-quantile of the predictive distribution.
[[nodiscard]] double var_from_params(const DistParams& p, double alpha);

/// Rolling out-of-sample VaR forecasts over the last H observations of `returns`.
[[nodiscard]] RollResult roll(std::span<const double> returns, Family family, const RollConfig& cfg);

}  // namespace gasvar
