// gasvar: GAS volatility models, rolling VaR forecasts and backtests.

#include "gasvar/app/commands.hpp"
#include "gasvar/errors.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using gasvar::app::ReturnSeries;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitEstimation = 3;

int report_error(const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", {{"type", kind}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
    return code;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gasvar::InputError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw gasvar::InputError("failed writing '" + path.string() + "'");
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw gasvar::InputError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw gasvar::InputError(path.string() + ": " + e.what());
    }
}

std::vector<ReturnSeries> select_assets(const std::string& input, const std::vector<std::string>& wanted) {
    auto all = gasvar::app::ingest_csv(input);
    if (wanted.empty()) return all;
    std::vector<ReturnSeries> out;
    for (const auto& name : wanted) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.label == name; });
        if (it == all.end()) throw gasvar::InputError("asset '" + name + "' not found in " + input);
        out.push_back(*it);
    }
    return out;
}

std::vector<double> parse_alphas(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double a = 0.0;
        if (!gasvar::app::parse_double(item, a) || !(a > 0.0 && a < 0.5)) {
            throw gasvar::InputError("invalid VaR level '" + item + "'");
        }
        out.push_back(a);
    }
    if (out.empty()) throw gasvar::InputError("no VaR levels given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GAS volatility models: estimation, rolling VaR forecasts and backtesting"};
    app.set_version_flag("--version", gasvar::app::software_version());
    app.require_subcommand(1);

    std::string input;
    std::vector<std::string> assets;
    std::string dist = "norm";
    std::string alphas = "0.01,0.05";
    std::string window = "moving";
    std::size_t tail = 2500;
    std::string out_dir = ".";
    gasvar::app::RunConfig run;

    auto* fit = app.add_subcommand("fit", "Estimate a GAS model on each selected series");
    fit->add_option("--input", input, "Returns CSV (date,<ticker>,...)")->required();
    fit->add_option("--asset", assets, "Asset column(s); default all");
    fit->add_option("--dist", dist, "norm, std or sstd")->check(CLI::IsMember({"norm", "std", "sstd"}));
    fit->add_option("--tail", tail, "Use the last T observations (0 = all)");

    auto* roll = app.add_subcommand("roll", "Rolling one-step VaR forecasts with a full backtest report");
    roll->add_option("--input", input, "Returns CSV (date,<ticker>,...)")->required();
    roll->add_option("--asset", assets, "Asset column(s); default all");
    roll->add_option("--dist", dist, "norm, std or sstd")->check(CLI::IsMember({"norm", "std", "sstd"}));
    roll->add_option("--alpha", alphas, "Comma-separated VaR levels");
    roll->add_option("--forecast-length", run.forecast_length, "Out-of-sample length H");
    roll->add_option("--refit-every", run.refit_every, "Steps between re-estimations");
    roll->add_option("--window", window, "moving or recursive")->check(CLI::IsMember({"moving", "recursive"}));
    roll->add_option("--lags", run.lags, "Lagged hits in the DQ regression");
    roll->add_option("--workers", run.workers, "Threads for refits");
    roll->add_option("--seed", run.seed, "Seed recorded in the report");
    roll->add_option("--tail", tail, "Use the last T observations (0 = all)");
    roll->add_option("--out-dir", out_dir, "Directory for <asset>_<dist>.json and _steps.csv");

    std::string steps_path;
    std::size_t bt_lags = 4;
    auto* backtest = app.add_subcommand("backtest", "Backtest VaR paths from a per-step CSV");
    backtest->add_option("--steps", steps_path, "CSV with date,realized,var_<alpha>...")->required();
    backtest->add_option("--lags", bt_lags, "Lagged hits in the DQ regression");

    std::vector<std::string> report_paths;
    std::string baseline = "norm";
    std::string compare_out;
    auto* compare = app.add_subcommand("compare", "DQ p-value and QL-ratio tables across reports");
    compare->add_option("reports", report_paths, "Report JSON files")->required();
    compare->add_option("--baseline", baseline, "Model in the QL-ratio denominator")
        ->check(CLI::IsMember({"norm", "std", "sstd"}));
    compare->add_option("--out-dir", compare_out, "Write dq_pvalues.csv and ql_ratios.csv here (default: stdout)");

    gasvar::app::SimulateRequest sim;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Simulate a GAS path as an ingestible CSV");
    simulate->add_option("--dist", dist, "norm, std or sstd")->check(CLI::IsMember({"norm", "std", "sstd"}));
    simulate->add_option("--kappa", sim.model.kappa, "Intercept")->required();
    simulate->add_option("--a", sim.model.a_coef, "Score loading A")->required();
    simulate->add_option("--b", sim.model.b_coef, "Persistence B")->required();
    simulate->add_option("--mu", sim.model.mu, "Location");
    simulate->add_option("--nu", sim.model.nu, "Degrees of freedom (std, sstd)");
    simulate->add_option("--xi", sim.model.xi, "Skewness (sstd)");
    simulate->add_option("-T,--length", sim.length, "Number of observations")->required();
    simulate->add_option("--seed", sim.seed, "Generator seed");
    simulate->add_option("--label", sim.label, "Column name");
    simulate->add_option("--start-date", sim.start_date, "First date (YYYY-MM-DD)");
    simulate->add_option("--out", sim_out, "Output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage_error", e.what(), kExitInput);
    }

    try {
        const gasvar::Family family = gasvar::parse_family(dist);
        if (fit->parsed()) {
            for (const auto& s : select_assets(input, assets)) {
                auto doc = gasvar::app::cmd_fit(tail > 0 ? s.tail(tail) : s, family);
                std::cout << doc.dump(2) << '\n';
            }
        } else if (roll->parsed()) {
            run.dist = family;
            run.alpha_levels = parse_alphas(alphas);
            run.window = gasvar::parse_window(window);
            run.tail_length = tail > 0 ? std::optional<std::size_t>(tail) : std::nullopt;
            for (const auto& s : select_assets(input, assets)) {
                auto out = gasvar::app::cmd_roll_backtest(run, s);
                const std::string stem = s.label + "_" + dist;
                out.document["steps_csv"] = stem + "_steps.csv";
                write_file(fs::path(out_dir) / (stem + ".json"), out.document.dump(2) + "\n");
                write_file(fs::path(out_dir) / (stem + "_steps.csv"), out.steps.to_csv());
                std::cerr << "wrote " << (fs::path(out_dir) / (stem + ".json")).string() << '\n';
            }
        } else if (backtest->parsed()) {
            std::ifstream in(steps_path);
            if (!in) throw gasvar::InputError("cannot open '" + steps_path + "'");
            const auto table = gasvar::app::StepTable::parse_csv(in, steps_path);
            std::cout << gasvar::app::cmd_backtest(table, bt_lags).dump(2) << '\n';
        } else if (compare->parsed()) {
            std::vector<json> docs;
            for (const auto& p : report_paths) docs.push_back(read_json(p));
            const auto tables = gasvar::app::cmd_compare(docs, gasvar::parse_family(baseline));
            if (compare_out.empty()) {
                std::cout << "# DQ p-values\n" << tables.dq_pvalues_csv << "# QL ratios (baseline " << baseline
                          << ")\n" << tables.ql_ratios_csv;
            } else {
                write_file(fs::path(compare_out) / "dq_pvalues.csv", tables.dq_pvalues_csv);
                write_file(fs::path(compare_out) / "ql_ratios.csv", tables.ql_ratios_csv);
            }
        } else if (simulate->parsed()) {
            sim.model.family = family;
            if (family == gasvar::Family::NORM) {
                sim.model.nu = gasvar::kInfiniteNu;
                sim.model.xi = 1.0;
            } else if (family == gasvar::Family::STD) {
                sim.model.xi = 1.0;
            }
            if (family != gasvar::Family::NORM && std::isinf(sim.model.nu)) {
                throw gasvar::InputError("--nu is required for std and sstd");
            }
            const std::string csv = gasvar::app::cmd_simulate(sim);
            if (sim_out.empty()) {
                std::cout << csv;
            } else {
                write_file(sim_out, csv);
            }
        }
    } catch (const gasvar::InputError& e) {
        return report_error("input_error", e.what(), kExitInput);
    } catch (const gasvar::DomainError& e) {
        return report_error("domain_error", e.what(), kExitInput);
    } catch (const gasvar::RollError& e) {
        return report_error("roll_error", e.what(), kExitEstimation);
    } catch (const gasvar::EstimationError& e) {
        return report_error("estimation_error", e.what(), kExitEstimation);
    } catch (const std::exception& e) {
        return report_error("internal_error", e.what(), 1);
    }
    return 0;
}
