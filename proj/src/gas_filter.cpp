#include "gasvar/gas_filter.hpp"

#include "gasvar/errors.hpp"
#include "gasvar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace gasvar {

namespace {

constexpr double kLargeLogNuGap = 25.0;  // log(nu - 2) used for an infinite nu

DistParams shape_of(const GasModel& m) { return {m.family, m.mu, 1.0, m.xi, m.nu}; }

double advance(const GasModel& m, double score, double theta) {
    return m.kappa + m.a_coef * score + m.b_coef * theta;
}

}  // namespace

void validate(const GasModel& model) {
    if (!std::isfinite(model.kappa)) throw DomainError("kappa must be finite");
    if (!(model.a_coef >= 0.0) || !std::isfinite(model.a_coef)) throw DomainError("A must be finite and >= 0");
    if (!(std::abs(model.b_coef) < 1.0)) throw DomainError("|B| must be < 1");
    validate(shape_of(model));
}

FilterOutput filter_path(std::span<const double> returns, const GasModel& model) {
    validate(model);
    if (returns.empty()) {
        throw DomainError("cannot filter an empty series");
    }
    const dist::Kernel kernel(shape_of(model));
    FilterOutput out;
    out.theta_path.resize(returns.size());
    out.score_path.resize(returns.size());
    double theta = model.unconditional_theta();
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (!std::isfinite(returns[t])) {
            throw DomainError("non-finite return at index " + std::to_string(t));
        }
        const double sigma = std::exp(theta);
        if (!std::isfinite(theta) || !std::isfinite(sigma) || sigma <= 0.0) {
            throw ExplosiveFilterError(t, "GAS filter exploded at observation " + std::to_string(t));
        }
        double score = 0.0;
        out.loglik += kernel.log_density_and_score(returns[t], sigma, score);
        out.theta_path[t] = theta;
        out.score_path[t] = score;
        theta = advance(model, score, theta);
    }
    if (!std::isfinite(theta)) {
        throw ExplosiveFilterError(returns.size(), "GAS filter exploded after the last observation");
    }
    out.theta_next = theta;
    return out;
}

double log_likelihood(std::span<const double> returns, const GasModel& model) noexcept {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    try {
        validate(model);
        const dist::Kernel kernel(shape_of(model));
        double theta = model.unconditional_theta();
        double loglik = 0.0;
        for (const double r : returns) {
            const double sigma = std::exp(theta);
            if (!std::isfinite(sigma) || sigma <= 0.0) {
                return kNaN;
            }
            double score = 0.0;
            loglik += kernel.log_density_and_score(r, sigma, score);
            theta = advance(model, score, theta);
        }
        return std::isfinite(loglik) ? loglik : kNaN;
    } catch (const DomainError&) {
        return kNaN;
    }
}

SimulatedPath simulate_path(const GasModel& model, std::size_t length, std::uint64_t seed) {
    validate(model);
    if (length == 0) {
        throw DomainError("simulation length must be >= 1");
    }
    const dist::Kernel kernel(shape_of(model));
    const CounterRng rng(seed);
    SimulatedPath path;
    path.returns.resize(length);
    path.theta_path.resize(length);
    double theta = model.unconditional_theta();
    for (std::size_t t = 0; t < length; ++t) {
        const double sigma = std::exp(theta);
        if (!std::isfinite(theta) || !std::isfinite(sigma) || sigma <= 0.0) {
            throw ExplosiveFilterError(t, "simulated GAS path exploded at step " + std::to_string(t));
        }
        const double r = kernel.quantile(rng.uniform(t), sigma);
        double score = 0.0;
        kernel.log_density_and_score(r, sigma, score);
        path.returns[t] = r;
        path.theta_path[t] = theta;
        theta = advance(model, score, theta);
    }
    return path;
}

namespace detail {

int free_parameter_count(Family family) noexcept {
    switch (family) {
    case Family::NORM: return 4;
    case Family::STD: return 5;
    case Family::SSTD: return 6;
    }
    return 4;
}

Eigen::VectorXd to_unconstrained(const GasModel& model) {
    Eigen::VectorXd x(free_parameter_count(model.family));
    x[0] = model.kappa;
    x[1] = std::log(model.a_coef);
    x[2] = std::atanh(model.b_coef);
    x[3] = model.mu;
    if (model.family != Family::NORM) {
        x[4] = std::isinf(model.nu) ? kLargeLogNuGap : std::log(model.nu - 2.0);
    }
    if (model.family == Family::SSTD) {
        x[5] = std::log(model.xi);
    }
    return x;
}

GasModel from_unconstrained(const Eigen::VectorXd& x, Family family) {
    GasModel m;
    m.family = family;
    m.kappa = x[0];
    m.a_coef = std::exp(x[1]);
    m.b_coef = std::tanh(x[2]);
    m.mu = x[3];
    m.nu = family == Family::NORM ? kInfiniteNu : 2.0 + std::exp(x[4]);
    m.xi = family == Family::SSTD ? std::exp(x[5]) : 1.0;
    return m;
}

}  // namespace detail

namespace {

GasModel adapt_start(GasModel start, Family family) {
    start.family = family;
    if (family == Family::NORM) {
        start.nu = kInfiniteNu;
        start.xi = 1.0;
    } else {
        if (std::isinf(start.nu)) start.nu = 2.0 + std::exp(kLargeLogNuGap);
        if (family == Family::STD) start.xi = 1.0;
    }
    // Keep the transform finite.
    start.a_coef = std::max(start.a_coef, 1e-8);
    start.b_coef = std::clamp(start.b_coef, -0.9999, 0.9999);
    return start;
}

std::vector<double> delta_method_errors(const Eigen::MatrixXd& hessian, const GasModel& m) {
    const Eigen::Index n = hessian.rows();
    Eigen::VectorXd jac(n);
    jac[0] = 1.0;
    jac[1] = m.a_coef;
    jac[2] = 1.0 - m.b_coef * m.b_coef;
    jac[3] = 1.0;
    if (n > 4) jac[4] = m.nu - 2.0;
    if (n > 5) jac[5] = m.xi;
    std::vector<double> se(static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN());
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(hessian);
    if (!lu.isInvertible()) {
        return se;
    }
    const Eigen::MatrixXd cov = lu.inverse();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (cov(i, i) > 0.0) {
            se[static_cast<std::size_t>(i)] = std::abs(jac[i]) * std::sqrt(cov(i, i));
        }
    }
    return se;
}

}  // namespace

FitResult estimate(std::span<const double> returns, Family family, const EstimateOptions& options) {
    const std::size_t n = returns.size();
    if (n < options.min_length) {
        throw EstimationError("need at least " + std::to_string(options.min_length) + " observations, got " +
                              std::to_string(n));
    }
    if (!std::all_of(returns.begin(), returns.end(), [](double r) { return std::isfinite(r); })) {
        throw EstimationError("returns contain non-finite values");
    }
    const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (const double r : returns) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
    if (*lo == *hi || !(sd > 0.0) || !std::isfinite(std::log(sd))) {
        throw EstimationError("returns have zero variance");
    }

    // Variance-targeted starting points.
    auto targeted = [&](double a, double b) {
        GasModel m;
        m.family = family;
        m.a_coef = a;
        m.b_coef = b;
        m.kappa = (1.0 - b) * std::log(sd);
        m.mu = mean;
        m.nu = family == Family::NORM ? kInfiniteNu : 8.0;
        m.xi = 1.0;
        return m;
    };
    std::vector<GasModel> starts{targeted(0.05, 0.9)};
    if (options.restarts) {
        starts.push_back(targeted(0.02, 0.98));
        starts.push_back(targeted(0.1, 0.8));
    }
    for (const auto& warm : options.warm_starts) {
        starts.push_back(adapt_start(warm, family));
    }

    // The optimizer works on the transform with mu measured in sample standard
    // deviations, so all coordinates have comparable curvature.
    const double scale = 1.0 / static_cast<double>(n);
    auto to_model = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd x = y;
        x[3] *= sd;
        return detail::from_unconstrained(x, family);
    };
    auto to_search = [&](const GasModel& m) {
        Eigen::VectorXd y = detail::to_unconstrained(m);
        y[3] /= sd;
        return y;
    };
    const optim::Objective objective = [&](const Eigen::VectorXd& y) {
        const double ll = log_likelihood(returns, to_model(y));
        return std::isfinite(ll) ? -ll * scale : std::numeric_limits<double>::infinity();
    };

    optim::BfgsResult best;
    bool have_best = false;
    for (const auto& start : starts) {
        auto run = optim::minimize_bfgs(objective, to_search(start), options.optimizer);
        if (!std::isfinite(run.value)) {
            continue;
        }
        if (!have_best || run.value < best.value) {
            best = std::move(run);
            have_best = true;
        }
    }
    if (!have_best) {
        throw EstimationError("log-likelihood is not finite at any starting point");
    }

    FitResult fit;
    fit.model = to_model(best.x);
    fit.converged = best.converged;
    fit.iterations = best.iterations;
    fit.n_obs = n;
    auto filtered = filter_path(returns, fit.model);
    fit.loglik = filtered.loglik;
    fit.theta_path = std::move(filtered.theta_path);
    fit.theta_next = filtered.theta_next;
    if (options.standard_errors) {
        const optim::Objective total = [&](const Eigen::VectorXd& x) { return objective(x) / scale; };
        // Hessian on the unscaled transform.
        Eigen::VectorXd x = best.x;
        x[3] *= sd;
        const optim::Objective unscaled = [&](const Eigen::VectorXd& z) {
            Eigen::VectorXd y = z;
            y[3] /= sd;
            return total(y);
        };
        fit.standard_errors = delta_method_errors(optim::central_hessian(unscaled, x, 1e-4), fit.model);
    }
    return fit;
}

}  // namespace gasvar
