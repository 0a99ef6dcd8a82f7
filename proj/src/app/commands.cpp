#include "gasvar/app/commands.hpp"

#include "gasvar/errors.hpp"

#include <algorithm>
#include <map>
#include <cmath>
#include <sstream>

namespace gasvar::app {

using nlohmann::json;

RollConfig RunConfig::roll_config() const {
    RollConfig rc;
    rc.forecast_length = forecast_length;
    rc.refit_every = refit_every;
    rc.window = window;
    rc.var_levels = alpha_levels;
    rc.seed = seed;
    rc.workers = workers;
    return rc;
}

json RunConfig::to_json() const {
    return {
        {"dist", std::string(to_string(dist))},
        {"alpha_levels", alpha_levels},
        {"forecast_length", forecast_length},
        {"refit_every", refit_every},
        {"window", std::string(to_string(window))},
        {"lags", lags},
        {"seed", seed},
        {"horizon", 1},
        {"tail_length", tail_length ? json(*tail_length) : json(nullptr)},
    };
}

RollOutput cmd_roll_backtest(const RunConfig& cfg, const ReturnSeries& full) {
    const ReturnSeries series = cfg.tail_length ? full.tail(*cfg.tail_length) : full;
    if (series.size() <= cfg.forecast_length) {
        throw InputError("series '" + series.label + "' has " + std::to_string(series.size()) +
                         " observations, not more than the forecast length " + std::to_string(cfg.forecast_length));
    }
    const RollResult rolled = roll(series.values, cfg.dist, cfg.roll_config());

    RollOutput out;
    const std::size_t start = rolled.in_sample_length;
    out.steps.dates.assign(series.dates.begin() + static_cast<std::ptrdiff_t>(start), series.dates.end());
    out.steps.realized = rolled.realized;
    out.steps.alphas = cfg.alpha_levels;
    out.steps.var.assign(cfg.alpha_levels.size(), {});
    for (const auto& row : rolled.var_forecasts) {
        for (std::size_t j = 0; j < row.size(); ++j) out.steps.var[j].push_back(row[j]);
    }

    const json config = cfg.to_json();
    const json refits = {
        {"count", rolled.refit_indices.size()},
        {"failures", rolled.failed_refits.size()},
        {"nonconverged", rolled.nonconverged_refits},
        {"failed_steps", rolled.failed_refits},
    };
    json reports = json::array();
    for (std::size_t j = 0; j < cfg.alpha_levels.size(); ++j) {
        json r = to_json(backtest(out.steps.realized, out.steps.var[j], cfg.alpha_levels[j], cfg.lags));
        r["config"] = config;
        r["asset"] = series.label;
        r["refits"] = refits;
        reports.push_back(std::move(r));
    }
    out.document = {
        {"schema_version", kReportSchemaVersion},
        {"software_version", software_version()},
        {"asset", series.label},
        {"dist", std::string(to_string(cfg.dist))},
        {"config", config},
        {"oos", {{"start", out.steps.dates.front()}, {"end", out.steps.dates.back()}, {"length", rolled.realized.size()}}},
        {"refits", refits},
        {"reports", std::move(reports)},
    };
    return out;
}

json cmd_backtest(const StepTable& steps, std::size_t lags) {
    if (steps.realized.empty()) throw InputError("step table has no rows");
    json reports = json::array();
    for (std::size_t j = 0; j < steps.alphas.size(); ++j) {
        reports.push_back(to_json(backtest(steps.realized, steps.var[j], steps.alphas[j], lags)));
    }
    return {
        {"schema_version", kReportSchemaVersion},
        {"software_version", software_version()},
        {"lags", lags},
        {"oos", {{"start", steps.dates.front()}, {"end", steps.dates.back()}, {"length", steps.realized.size()}}},
        {"reports", std::move(reports)},
    };
}

json cmd_fit(const ReturnSeries& series, Family family) {
    EstimateOptions options;
    options.standard_errors = true;
    const FitResult fit = estimate(series.values, family, options);
    json se = nullptr;
    if (fit.standard_errors) {
        static constexpr const char* kNames[] = {"kappa", "a", "b", "mu", "nu", "xi"};
        se = json::object();
        for (std::size_t i = 0; i < fit.standard_errors->size(); ++i) {
            const double v = (*fit.standard_errors)[i];
            se[kNames[i]] = std::isfinite(v) ? json(v) : json(nullptr);
        }
    }
    return {
        {"schema_version", kReportSchemaVersion},
        {"software_version", software_version()},
        {"asset", series.label},
        {"n_obs", fit.n_obs},
        {"model", to_json(fit.model)},
        {"loglik", fit.loglik},
        {"converged", fit.converged},
        {"iterations", fit.iterations},
        {"standard_errors", se},
        {"theta_next", fit.theta_next},
        {"sigma_next", std::exp(fit.theta_next)},
    };
}

namespace {

struct Cell {
    double dq_pvalue = 0.0;
    double ql_mean = 0.0;
};

std::string csv_header(const std::vector<double>& alphas, const std::vector<Family>& models) {
    std::string h = "asset";
    for (const double a : alphas) {
        for (const Family f : models) h += "," + std::string(to_string(f)) + "_a" + format_double(a);
    }
    return h + "\n";
}

}  // namespace

ComparisonTables cmd_compare(const std::vector<json>& documents, Family baseline) {
    if (documents.size() < 2) throw InputError("compare needs at least two reports");

    std::vector<double> alphas;
    std::optional<std::size_t> length;
    std::vector<std::string> assets;
    std::map<std::string, std::pair<std::string, std::string>> windows;
    std::map<std::pair<std::string, Family>, const json*> docs;

    for (const auto& doc : documents) {
        if (!doc.is_object() || doc.value("schema_version", 0) != kReportSchemaVersion || !doc.contains("reports")) {
            throw InputError("not a roll report document (schema_version " + std::to_string(kReportSchemaVersion) + ")");
        }
        const std::string asset = doc.at("asset");
        const Family family = parse_family(doc.at("dist").get<std::string>());
        std::vector<double> doc_alphas;
        for (const auto& r : doc.at("reports")) doc_alphas.push_back(r.at("alpha"));
        if (alphas.empty()) alphas = doc_alphas;
        if (doc_alphas != alphas) throw InputError("reports use different VaR levels");
        const std::size_t doc_length = doc.at("oos").at("length");
        if (length && *length != doc_length) throw InputError("reports use different forecast lengths");
        length = doc_length;
        const auto window = std::make_pair(doc.at("oos").at("start").get<std::string>(),
                                           doc.at("oos").at("end").get<std::string>());
        if (const auto it = windows.find(asset); it != windows.end()) {
            if (it->second != window) throw InputError("reports for '" + asset + "' cover different windows");
        } else {
            windows.emplace(asset, window);
            assets.push_back(asset);
        }
        const auto key = std::make_pair(asset, family);
        if (const auto it = docs.find(key); it != docs.end()) {
            if (*it->second != doc) throw InputError("conflicting reports for " + asset + "/" + std::string(to_string(family)));
            continue;
        }
        docs.emplace(key, &doc);
    }

    std::vector<Family> models;
    for (const Family f : {Family::NORM, Family::STD, Family::SSTD}) {
        if (std::any_of(docs.begin(), docs.end(), [&](const auto& kv) { return kv.first.second == f; })) {
            models.push_back(f);
        }
    }
    if (std::find(models.begin(), models.end(), baseline) == models.end()) {
        throw InputError("no report for the baseline model '" + std::string(to_string(baseline)) + "'");
    }

    auto cell = [&](const std::string& asset, Family f, std::size_t j) -> std::optional<Cell> {
        const auto it = docs.find({asset, f});
        if (it == docs.end()) return std::nullopt;
        const json& r = it->second->at("reports").at(j);
        return Cell{r.at("dq").at("pvalue"), r.at("ql").at("mean")};
    };

    std::ostringstream dq, ql;
    dq << csv_header(alphas, models);
    ql << csv_header(alphas, models);
    for (const auto& asset : assets) {
        dq << asset;
        ql << asset;
        for (std::size_t j = 0; j < alphas.size(); ++j) {
            const auto base = cell(asset, baseline, j);
            for (const Family f : models) {
                const auto c = cell(asset, f, j);
                dq << ',' << (c ? format_double(c->dq_pvalue) : "NA");
                ql << ',' << (c && base ? format_double(ql_ratio(c->ql_mean, base->ql_mean)) : "NA");
            }
        }
        dq << '\n';
        ql << '\n';
    }
    return {dq.str(), ql.str(), assets.size(), alphas.size() * models.size()};
}

std::string cmd_simulate(const SimulateRequest& request) {
    const auto path = simulate_path(request.model, request.length, request.seed);
    ReturnSeries series{request.label, {}, path.returns};
    series.dates.reserve(request.length);
    for (std::size_t t = 0; t < request.length; ++t) {
        series.dates.push_back(add_days(request.start_date, static_cast<int>(t)));
    }
    return format_returns_csv({series});
}

}  // namespace gasvar::app
