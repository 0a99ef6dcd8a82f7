#pragma once

#include "gasvar/backtester.hpp"
#include "gasvar/forecaster.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace gasvar::app {

inline constexpr int kReportSchemaVersion = 1;

[[nodiscard]] std::string software_version();

/// Per-step output of a roll: the data needed to redraw the VaR figure and to
/// recompute every backtest statistic.
struct StepTable {
    std::vector<std::string> dates;
    std::vector<double> realized;
    std::vector<double> alphas;
    std::vector<std::vector<double>> var;  ///< var[j] is the VaR path at alphas[j]

    /// Header `date,realized,var_<alpha>...`.
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] static StepTable parse_csv(std::istream& in, std::string_view source = "<stream>");
};

[[nodiscard]] nlohmann::json to_json(const BacktestReport& report);
[[nodiscard]] nlohmann::json to_json(const GasModel& model);

}  // namespace gasvar::app
