#pragma once

#include "gasvar/app/csv.hpp"
#include "gasvar/app/report.hpp"
#include "gasvar/forecaster.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gasvar::app {

struct RunConfig {
    Family dist = Family::NORM;
    std::vector<double> alpha_levels{0.01, 0.05};
    std::size_t forecast_length = 1000;
    std::size_t refit_every = 1;
    WindowType window = WindowType::MOVING;
    std::size_t lags = 4;
    std::size_t workers = 1;
    std::uint64_t seed = 0;
    /// Keep only the last T observations before rolling.
    std::optional<std::size_t> tail_length = 2500;

    [[nodiscard]] RollConfig roll_config() const;
    /// Echo written into reports. Excludes `workers`, which never changes results.
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Report document plus the per-step table it was computed from.
struct RollOutput {
    nlohmann::json document;
    StepTable steps;
};

/// Roll, then backtest every alpha level. Throws RollError when too many refits fail.
[[nodiscard]] RollOutput cmd_roll_backtest(const RunConfig& cfg, const ReturnSeries& series);

/// Recomputes the per-alpha reports from a step table alone.
[[nodiscard]] nlohmann::json cmd_backtest(const StepTable& steps, std::size_t lags);

/// Estimates one model on a whole series.
[[nodiscard]] nlohmann::json cmd_fit(const ReturnSeries& series, Family family);

struct ComparisonTables {
    std::string dq_pvalues_csv;
    std::string ql_ratios_csv;
    std::size_t rows = 0;
    std::size_t columns = 0;  ///< value columns, excluding `asset`
};

/// DQ p-value and QL-ratio tables over report documents (one per asset and model).
[[nodiscard]] ComparisonTables cmd_compare(const std::vector<nlohmann::json>& documents, Family baseline = Family::NORM);

struct SimulateRequest {
    GasModel model;
    std::size_t length = 1000;
    std::uint64_t seed = 0;
    std::string label = "SIM";
    std::string start_date = "2000-01-03";
};

/// Simulated series as CSV text in the ingest format, one row per calendar day.
[[nodiscard]] std::string cmd_simulate(const SimulateRequest& request);

}  // namespace gasvar::app
