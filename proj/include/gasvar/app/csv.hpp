#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace gasvar::app {

/// One asset's log-returns indexed by ISO-8601 dates.
struct ReturnSeries {
    std::string label;
    std::vector<std::string> dates;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    /// Keeps the last `n` observations (no-op when n >= size()).
    [[nodiscard]] ReturnSeries tail(std::size_t n) const;
};

/// `date,<ticker>,...` with one row per date. Throws InputError with the
/// offending line number on any malformed content.
[[nodiscard]] std::vector<ReturnSeries> parse_returns_csv(std::istream& in, std::string_view source = "<stream>");
[[nodiscard]] std::vector<ReturnSeries> ingest_csv(const std::filesystem::path& path);

/// Writes series sharing one date index in the format parse_returns_csv reads.
[[nodiscard]] std::string format_returns_csv(const std::vector<ReturnSeries>& series);

/// Shortest decimal text that parses back to exactly `value`.
[[nodiscard]] std::string format_double(double value);
/// Strict decimal parse of a whole field; false for NaN, infinities and trailing junk.
[[nodiscard]] bool parse_double(std::string_view text, double& value);

/// True for a valid calendar date written YYYY-MM-DD.
[[nodiscard]] bool is_iso_date(std::string_view text);
/// `start` plus `days` calendar days.
[[nodiscard]] std::string add_days(std::string_view start, int days);

/// Splits one CSV line, trimming whitespace and surrounding double quotes.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace gasvar::app
