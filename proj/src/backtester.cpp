#include "gasvar/backtester.hpp"

#include "gasvar/errors.hpp"
#include "gasvar/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gasvar {

namespace {

// x log y with 0 log 0 = 0.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DomainError("length mismatch: " + std::to_string(a) + " realized returns vs " + std::to_string(b) +
                          " VaR forecasts");
    }
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

std::size_t HitSeries::count() const noexcept { return std::accumulate(hits.begin(), hits.end(), std::size_t{0}); }

HitSeries hit_series(std::span<const double> realized, std::span<const double> var_forecasts, double alpha) {
    require_same_length(realized.size(), var_forecasts.size());
    require_alpha(alpha);
    if (realized.empty()) throw DomainError("hit series needs at least one observation");
    HitSeries h;
    h.alpha = alpha;
    h.hits.resize(realized.size());
    for (std::size_t i = 0; i < realized.size(); ++i) {
        h.hits[i] = realized[i] < var_forecasts[i] ? 1 : 0;
    }
    return h;
}

double ae_ratio(const HitSeries& h) {
    return static_cast<double>(h.count()) / (h.alpha * static_cast<double>(h.length()));
}

TestResult kupiec_uc(const HitSeries& h) {
    const auto n = static_cast<double>(h.length());
    const auto x = static_cast<double>(h.count());
    const double a = h.alpha;
    const double null_ll = xlogy(n - x, 1.0 - a) + xlogy(x, a);
    const double alt_ll = xlogy(n - x, 1.0 - x / n) + xlogy(x, x / n);
    TestResult r;
    r.stat = std::max(0.0, -2.0 * (null_ll - alt_ll));
    r.pvalue = special::chi_square_sf(r.stat, 1.0);
    return r;
}

double christoffersen_ind_stat(const HitSeries& h) {
    double n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    for (std::size_t t = 1; t < h.hits.size(); ++t) {
        const bool prev = h.hits[t - 1] != 0;
        const bool cur = h.hits[t] != 0;
        if (!prev) (cur ? n01 : n00) += 1.0;
        else (cur ? n11 : n10) += 1.0;
    }
    const double from0 = n00 + n01;
    const double from1 = n10 + n11;
    const double pi = (n01 + n11) / (from0 + from1);
    const double pi01 = from0 > 0.0 ? n01 / from0 : 0.0;
    const double pi11 = from1 > 0.0 ? n11 / from1 : 0.0;
    const double null_ll = xlogy(n00 + n10, 1.0 - pi) + xlogy(n01 + n11, pi);
    const double alt_ll = xlogy(n00, 1.0 - pi01) + xlogy(n01, pi01) + xlogy(n10, 1.0 - pi11) + xlogy(n11, pi11);
    return std::max(0.0, -2.0 * (null_ll - alt_ll));
}

TestResult christoffersen_cc(const HitSeries& h) {
    if (h.length() < 2) throw DomainError("conditional coverage needs at least two observations");
    TestResult r;
    r.stat = kupiec_uc(h).stat + christoffersen_ind_stat(h);
    r.pvalue = special::chi_square_sf(r.stat, 2.0);
    return r;
}

DqResult dq_test(const HitSeries& h, std::span<const double> var_forecasts, std::size_t lags) {
    require_same_length(h.length(), var_forecasts.size());
    const std::size_t n = h.length();
    if (n <= lags + 2) throw DomainError("DQ test needs more than lags + 2 observations");

    const auto rows = static_cast<Eigen::Index>(n - lags);
    const auto cols = static_cast<Eigen::Index>(lags + 2);
    Eigen::VectorXd demeaned(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) demeaned[static_cast<Eigen::Index>(i)] = h.hits[i] - h.alpha;

    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd response(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index s = r + static_cast<Eigen::Index>(lags);
        design(r, 0) = 1.0;
        for (Eigen::Index l = 1; l <= static_cast<Eigen::Index>(lags); ++l) design(r, l) = demeaned[s - l];
        design(r, cols - 1) = var_forecasts[static_cast<std::size_t>(s)];
        response[r] = demeaned[s];
    }

    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    const Eigen::VectorXd coef = cod.solve(response);
    // b'(X'X)b equals the squared norm of the fitted values.
    const Eigen::VectorXd fitted = design * coef;

    DqResult out;
    out.degrees_of_freedom = lags + 2;
    out.rank_deficient = cod.rank() < cols;
    out.stat = std::max(0.0, fitted.squaredNorm() / (h.alpha * (1.0 - h.alpha)));
    out.pvalue = special::chi_square_sf(out.stat, static_cast<double>(out.degrees_of_freedom));
    return out;
}

LossSeries quantile_loss(std::span<const double> realized, std::span<const double> var_forecasts, double alpha) {
    require_same_length(realized.size(), var_forecasts.size());
    require_alpha(alpha);
    LossSeries loss;
    loss.series.resize(realized.size());
    for (std::size_t i = 0; i < realized.size(); ++i) {
        const double hit = realized[i] < var_forecasts[i] ? 1.0 : 0.0;
        loss.series[i] = (alpha - hit) * (realized[i] - var_forecasts[i]);
    }
    if (!loss.series.empty()) {
        loss.mean = std::accumulate(loss.series.begin(), loss.series.end(), 0.0) /
                    static_cast<double>(loss.series.size());
    }
    return loss;
}

double ql_ratio(double mean_a, double mean_b) {
    if (!(mean_b > 0.0)) throw DomainError("QL ratio needs a positive baseline loss");
    return mean_a / mean_b;
}

AbsoluteDeviation absolute_deviation(std::span<const double> realized, std::span<const double> var_forecasts,
                                     const HitSeries& h) {
    require_same_length(realized.size(), var_forecasts.size());
    require_same_length(realized.size(), h.length());
    AbsoluteDeviation ad;
    std::size_t count = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < realized.size(); ++i) {
        if (h.hits[i] == 0) continue;
        const double dev = std::abs(realized[i] - var_forecasts[i]);
        sum += dev;
        ad.max = std::max(ad.max, dev);
        ++count;
    }
    ad.mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
    return ad;
}

BacktestReport backtest(std::span<const double> realized, std::span<const double> var_forecasts, double alpha,
                        std::size_t lags) {
    const HitSeries h = hit_series(realized, var_forecasts, alpha);
    BacktestReport report;
    report.alpha = alpha;
    report.length = h.length();
    report.hits = h.count();
    report.ae = ae_ratio(h);
    report.uc = kupiec_uc(h);
    report.cc = christoffersen_cc(h);
    report.dq = dq_test(h, var_forecasts, lags);
    report.ql = quantile_loss(realized, var_forecasts, alpha);
    report.ad = absolute_deviation(realized, var_forecasts, h);
    return report;
}

}  // namespace gasvar
