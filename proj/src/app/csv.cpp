#include "gasvar/app/csv.hpp"

#include "gasvar/errors.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gasvar::app {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    s = s.substr(first, last - first + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
    throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

ReturnSeries ReturnSeries::tail(std::size_t n) const {
    if (n >= size()) return *this;
    const auto skip = static_cast<std::ptrdiff_t>(size() - n);
    return {label, {dates.begin() + skip, dates.end()}, {values.begin() + skip, values.end()}};
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        fields.emplace_back(trim(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

bool parse_double(std::string_view text, double& value) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(value);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, ptr};
}

bool is_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    int y = 0;
    unsigned m = 0, d = 0;
    auto digits = [&](std::size_t at, std::size_t len, auto& out) {
        const auto [ptr, ec] = std::from_chars(text.data() + at, text.data() + at + len, out);
        return ec == std::errc{} && ptr == text.data() + at + len;
    };
    if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return false;
    return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}.ok();
}

std::string add_days(std::string_view start, int days) {
    if (!is_iso_date(start)) throw InputError("invalid ISO date '" + std::string(start) + "'");
    using namespace std::chrono;
    const year_month_day base{year{std::stoi(std::string(start.substr(0, 4)))},
                              month{static_cast<unsigned>(std::stoi(std::string(start.substr(5, 2))))},
                              day{static_cast<unsigned>(std::stoi(std::string(start.substr(8, 2))))}};
    const year_month_day out{sys_days{base} + std::chrono::days{days}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(out.year()), static_cast<unsigned>(out.month()),
                  static_cast<unsigned>(out.day()));
    return buf;
}

std::vector<ReturnSeries> parse_returns_csv(std::istream& in, std::string_view source) {
    std::string line;
    std::size_t line_no = 0;
    // Header.
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) fail(source, line_no, "empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.front() != "date") {
        fail(source, line_no, "malformed header: expected 'date,<ticker>,...'");
    }
    std::set<std::string> seen;
    std::vector<ReturnSeries> series;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty()) fail(source, line_no, "empty column name in header");
        if (!seen.insert(header[c]).second) fail(source, line_no, "duplicate column '" + header[c] + "'");
        series.push_back({header[c], {}, {}});
    }

    std::string previous_date;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            fail(source, line_no,
                 "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
        }
        if (!is_iso_date(fields[0])) fail(source, line_no, "invalid date '" + fields[0] + "'");
        if (!previous_date.empty() && fields[0] <= previous_date) {
            fail(source, line_no, "dates not strictly increasing ('" + fields[0] + "' after '" + previous_date + "')");
        }
        for (std::size_t c = 1; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_double(fields[c], v)) {
                fail(source, line_no, "non-numeric value '" + fields[c] + "' in column '" + header[c] + "'");
            }
            series[c - 1].values.push_back(v);
            series[c - 1].dates.push_back(fields[0]);
        }
        previous_date = fields[0];
    }
    return series;
}

std::vector<ReturnSeries> ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return parse_returns_csv(in, path.string());
}

std::string format_returns_csv(const std::vector<ReturnSeries>& series) {
    if (series.empty()) return "date\n";
    std::ostringstream out;
    out << "date";
    for (const auto& s : series) out << ',' << s.label;
    out << '\n';
    for (std::size_t i = 0; i < series.front().size(); ++i) {
        out << series.front().dates[i];
        for (const auto& s : series) out << ',' << format_double(s.values.at(i));
        out << '\n';
    }
    return out.str();
}

}  // namespace gasvar::app
