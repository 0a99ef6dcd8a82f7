#include "gasvar/app/report.hpp"

#include "gasvar/app/csv.hpp"
#include "gasvar/errors.hpp"

#include <cmath>
#include <sstream>

namespace gasvar::app {

std::string software_version() { return GASVAR_VERSION; }

std::string StepTable::to_csv() const {
    std::ostringstream out;
    out << "date,realized";
    for (const double a : alphas) out << ",var_" << format_double(a);
    out << '\n';
    for (std::size_t i = 0; i < realized.size(); ++i) {
        out << dates.at(i) << ',' << format_double(realized[i]);
        for (const auto& path : var) out << ',' << format_double(path.at(i));
        out << '\n';
    }
    return out.str();
}

StepTable StepTable::parse_csv(std::istream& in, std::string_view source) {
    auto fail = [&](std::size_t line, const std::string& what) {
        throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + what);
    };
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) fail(line_no, "empty step file");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "date" || header[1] != "realized") {
        fail(line_no, "expected header 'date,realized,var_<alpha>,...'");
    }
    StepTable table;
    for (std::size_t c = 2; c < header.size(); ++c) {
        double a = 0.0;
        if (header[c].rfind("var_", 0) != 0 || !parse_double(std::string_view(header[c]).substr(4), a) ||
            !(a > 0.0 && a < 1.0)) {
            fail(line_no, "bad VaR column '" + header[c] + "'");
        }
        table.alphas.push_back(a);
    }
    table.var.resize(table.alphas.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) fail(line_no, "wrong number of fields");
        if (!is_iso_date(fields[0])) fail(line_no, "invalid date '" + fields[0] + "'");
        double v = 0.0;
        if (!parse_double(fields[1], v)) fail(line_no, "non-numeric realized return");
        table.dates.push_back(fields[0]);
        table.realized.push_back(v);
        for (std::size_t j = 0; j < table.alphas.size(); ++j) {
            if (!parse_double(fields[j + 2], v)) fail(line_no, "non-numeric VaR '" + fields[j + 2] + "'");
            table.var[j].push_back(v);
        }
    }
    return table;
}

nlohmann::json to_json(const BacktestReport& r) {
    return {
        {"alpha", r.alpha},
        {"length", r.length},
        {"hits", r.hits},
        {"ae", r.ae},
        {"uc", {{"stat", r.uc.stat}, {"pvalue", r.uc.pvalue}}},
        {"cc", {{"stat", r.cc.stat}, {"pvalue", r.cc.pvalue}}},
        {"dq",
         {{"stat", r.dq.stat},
          {"pvalue", r.dq.pvalue},
          {"df", r.dq.degrees_of_freedom},
          {"rank_deficient", r.dq.rank_deficient}}},
        {"ql", {{"mean", r.ql.mean}, {"series", r.ql.series}}},
        {"ad", {{"mean", r.ad.mean}, {"max", r.ad.max}}},
    };
}

nlohmann::json to_json(const GasModel& m) {
    nlohmann::json j = {
        {"dist", std::string(to_string(m.family))},
        {"kappa", m.kappa},
        {"a", m.a_coef},
        {"b", m.b_coef},
        {"mu", m.mu},
        {"xi", m.xi},
    };
    j["nu"] = std::isinf(m.nu) ? nlohmann::json(nullptr) : nlohmann::json(m.nu);
    return j;
}

}  // namespace gasvar::app
