#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gasvar {

/// Violation indicators d_s = 1{r_s < VaR_s}. Ties are not violations.
struct HitSeries {
    std::vector<std::uint8_t> hits;
    double alpha = 0.0;

    [[nodiscard]] std::size_t length() const noexcept { return hits.size(); }
    [[nodiscard]] std::size_t count() const noexcept;
};

struct TestResult {
    double stat = 0.0;
    double pvalue = 1.0;
};

struct DqResult {
    double stat = 0.0;
    double pvalue = 1.0;
    std::size_t degrees_of_freedom = 0;
    /// The regressor matrix was rank deficient; the pseudo-inverse was used.
    bool rank_deficient = false;
};

struct LossSeries {
    std::vector<double> series;
    double mean = 0.0;
};

struct AbsoluteDeviation {
    double mean = 0.0;
    double max = 0.0;
};

struct BacktestReport {
    double alpha = 0.0;
    std::size_t length = 0;
    std::size_t hits = 0;
    double ae = 0.0;
    TestResult uc;
    TestResult cc;
    DqResult dq;
    LossSeries ql;
    AbsoluteDeviation ad;
};

[[nodiscard]] HitSeries hit_series(std::span<const double> realized, std::span<const double> var_forecasts,
                                   double alpha);

/// Actual over expected violations.
[[nodiscard]] double ae_ratio(const HitSeries& h);

/// Kupiec unconditional coverage LR test, chi-square(1).
[[nodiscard]] TestResult kupiec_uc(const HitSeries& h);

/// First-order Markov independence LR statistic (the part Christoffersen adds to Kupiec).
[[nodiscard]] double christoffersen_ind_stat(const HitSeries& h);

/// Christoffersen conditional coverage: LR_uc + LR_ind, chi-square(2).
[[nodiscard]] TestResult christoffersen_cc(const HitSeries& h);

/// Engle-Manganelli dynamic quantile test. Demeaned hits are regressed on a
/// constant, `lags` lagged demeaned hits and the contemporaneous VaR;
/// chi-square(lags + 2).
[[nodiscard]] DqResult dq_test(const HitSeries& h, std::span<const double> var_forecasts, std::size_t lags = 4);

/// QL_s = (alpha - d_s)(r_s - VaR_s).
[[nodiscard]] LossSeries quantile_loss(std::span<const double> realized, std::span<const double> var_forecasts,
                                       double alpha);

/// mean_a / mean_b; below 1 means model a has the lower average loss.
[[nodiscard]] double ql_ratio(double mean_a, double mean_b);

/// |r_s - VaR_s| over violation instants; (0, 0) when there are none.
[[nodiscard]] AbsoluteDeviation absolute_deviation(std::span<const double> realized,
                                                   std::span<const double> var_forecasts, const HitSeries& h);

/// All of the above for one VaR level.
[[nodiscard]] BacktestReport backtest(std::span<const double> realized, std::span<const double> var_forecasts,
                                      double alpha, std::size_t lags = 4);

}  // namespace gasvar
