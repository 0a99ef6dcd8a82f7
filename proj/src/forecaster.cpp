#include "gasvar/forecaster.hpp"

#include "gasvar/errors.hpp"
#include "gasvar/parallel.hpp"
#include "gasvar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <variant>

namespace gasvar {

std::string_view to_string(WindowType w) noexcept {
    return w == WindowType::MOVING ? "moving" : "recursive";
}

WindowType parse_window(std::string_view label) {
    if (label == "moving") return WindowType::MOVING;
    if (label == "recursive") return WindowType::RECURSIVE;
    throw InputError("unknown window '" + std::string(label) + "' (expected moving or recursive)");
}

void validate(const RollConfig& cfg) {
    if (cfg.forecast_length < 1) throw DomainError("forecast length must be >= 1");
    if (cfg.refit_every < 1) throw DomainError("refit_every must be >= 1");
    if (cfg.horizon != 1) throw DomainError("rolling forecasts support horizon 1 only; use predict_h_step for h > 1");
    if (cfg.var_levels.empty()) throw DomainError("at least one VaR level is required");
    for (const double a : cfg.var_levels) {
        if (!(a > 0.0 && a < 0.5)) throw DomainError("VaR levels must lie in (0, 0.5)");
    }
    if (!(cfg.max_failure_fraction >= 0.0)) throw DomainError("max_failure_fraction must be >= 0");
}

DistParams predict_one_step(const FitResult& fit, std::span<const double> returns) {
    const auto filtered = filter_path(returns, fit.model);
    return fit.model.params_at(filtered.theta_next);
}

HorizonDraws predict_h_step(const FitResult& fit, std::size_t h, std::size_t sim_draws, std::uint64_t seed) {
    if (h < 2) throw DomainError("h = 1 has a closed-form predictive distribution; use predict_one_step");
    if (sim_draws < 1000) throw DomainError("at least 1000 simulated paths are required");
    const GasModel& model = fit.model;
    validate(model);
    const dist::Kernel kernel({model.family, model.mu, 1.0, model.xi, model.nu});
    const CounterRng rng(seed);

    HorizonDraws out;
    out.draws.reserve(sim_draws);
    for (std::size_t path = 0; path < sim_draws; ++path) {
        double theta = fit.theta_next;
        double r = 0.0;
        bool ok = true;
        for (std::size_t step = 0; step < h; ++step) {
            const double sigma = std::exp(theta);
            if (!std::isfinite(sigma) || sigma <= 0.0) {
                ok = false;
                break;
            }
            r = kernel.quantile(rng.uniform(path * h + step), sigma);
            if (step + 1 < h) {
                double score = 0.0;
                kernel.log_density_and_score(r, sigma, score);
                theta = model.kappa + model.a_coef * score + model.b_coef * theta;
            }
        }
        if (ok && std::isfinite(r)) {
            out.draws.push_back(r);
        } else {
            ++out.exploded;
        }
    }
    if (static_cast<double>(out.exploded) > 0.001 * static_cast<double>(sim_draws)) {
        throw ExplosiveFilterError(h, std::to_string(out.exploded) + " of " + std::to_string(sim_draws) +
                                          " simulated paths exploded");
    }
    return out;
}

double empirical_quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw DomainError("empirical quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("probability must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double var_from_params(const DistParams& p, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("VaR level must lie in (0, 1)");
    return dist::quantile(alpha, p);
}

RollResult roll(std::span<const double> returns, Family family, const RollConfig& cfg) {
    validate(cfg);
    const std::size_t total = returns.size();
    const std::size_t horizon_len = cfg.forecast_length;
    if (total <= horizon_len) throw DomainError("series must be longer than the forecast length");
    const std::size_t in_sample = total - horizon_len;
    if (in_sample < cfg.estimation.min_length) {
        throw DomainError("in-sample length " + std::to_string(in_sample) + " is below the estimation floor");
    }

    // Data visible before out-of-sample step t is returns[0, S + t).
    auto window_start = [&](std::size_t step) { return cfg.window == WindowType::MOVING ? step : std::size_t{0}; };

    RollResult result;
    result.var_levels = cfg.var_levels;
    result.in_sample_length = in_sample;
    for (std::size_t step = 0; step < horizon_len; step += cfg.refit_every) {
        result.refit_indices.push_back(step);
        result.refit_window_starts.push_back(window_start(step));
        result.refit_window_lengths.push_back(in_sample + step - window_start(step));
    }

    using Outcome = std::variant<FitResult, std::string>;
    std::vector<std::optional<Outcome>> outcomes(result.refit_indices.size());
    parallel_for(outcomes.size(), cfg.workers, [&](std::size_t i) {
        const auto window = returns.subspan(result.refit_window_starts[i], result.refit_window_lengths[i]);
        try {
            outcomes[i] = estimate(window, family, cfg.estimation);
        } catch (const std::exception& e) {
            outcomes[i] = std::string(e.what());
        }
    });

    // Sequential assembly keeps the result independent of scheduling.
    std::optional<FitResult> current;
    std::size_t next_refit = 0;
    result.var_forecasts.reserve(horizon_len);
    for (std::size_t step = 0; step < horizon_len; ++step) {
        if (next_refit < outcomes.size() && result.refit_indices[next_refit] == step) {
            const Outcome& outcome = *outcomes[next_refit];
            if (const auto* fit = std::get_if<FitResult>(&outcome)) {
                current = *fit;
                if (!fit->converged) ++result.nonconverged_refits;
            } else {
                if (!current) {
                    throw RollError("initial estimation failed: " + std::get<std::string>(outcome));
                }
                result.failed_refits.push_back(step);
                result.failure_messages.push_back(std::get<std::string>(outcome));
            }
            result.refit_models.push_back(current->model);
            ++next_refit;
        }

        const std::size_t start = window_start(step);
        const auto visible = returns.subspan(start, in_sample + step - start);
        DistParams predictive;
        try {
            predictive = predict_one_step(*current, visible);
        } catch (const ExplosiveFilterError& e) {
            throw RollError("prediction at out-of-sample step " + std::to_string(step) + " failed: " + e.what());
        }
        std::vector<double> row;
        row.reserve(cfg.var_levels.size());
        for (const double alpha : cfg.var_levels) row.push_back(var_from_params(predictive, alpha));
        result.var_forecasts.push_back(std::move(row));
        result.pred_params.push_back(predictive);
        result.realized.push_back(returns[in_sample + step]);
    }

    const double failure_rate =
        static_cast<double>(result.failed_refits.size()) / static_cast<double>(result.refit_indices.size());
    if (failure_rate > cfg.max_failure_fraction) {
        throw RollError(std::to_string(result.failed_refits.size()) + " of " +
                        std::to_string(result.refit_indices.size()) + " refits failed (first: " +
                        result.failure_messages.front() + ")");
    }
    return result;
}

}  // namespace gasvar
