#include "gasvar/dist.hpp"

#include "gasvar/errors.hpp"
#include "gasvar/rng.hpp"
#include "gasvar/special.hpp"

#include <cmath>
#include <numbers>

namespace gasvar {

std::string_view to_string(Family f) noexcept {
    switch (f) {
    case Family::NORM: return "norm";
    case Family::STD: return "std";
    case Family::SSTD: return "sstd";
    }
    return "unknown";
}

Family parse_family(std::string_view label) {
    if (label == "norm") return Family::NORM;
    if (label == "std") return Family::STD;
    if (label == "sstd") return Family::SSTD;
    throw InputError("unknown distribution '" + std::string(label) + "' (expected norm, std or sstd)");
}

void validate(const DistParams& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
        throw DomainError("scale must be positive and finite");
    }
    if (!std::isfinite(p.mu)) {
        throw DomainError("location must be finite");
    }
    switch (p.family) {
    case Family::NORM:
        if (p.xi != 1.0) throw DomainError("Normal family requires xi = 1");
        break;
    case Family::STD:
        if (p.xi != 1.0) throw DomainError("Student-t family requires xi = 1");
        [[fallthrough]];
    case Family::SSTD:
        if (!(p.xi > 0.0) || !std::isfinite(p.xi)) throw DomainError("skewness xi must be positive and finite");
        if (!(p.nu > 2.0) || !std::isfinite(p.nu)) throw DomainError("degrees of freedom must be finite and > 2");
        break;
    }
}

namespace dist {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Standardized (unit variance) Student-t helpers.
double std_t_scale(double nu) { return std::sqrt(nu / (nu - 2.0)); }

double std_t_cdf(double x, double nu) {
    return std::isinf(nu) ? special::normal_cdf(x) : special::student_t_cdf(x * std_t_scale(nu), nu);
}

double std_t_sf(double x, double nu) {
    return std::isinf(nu) ? special::normal_sf(x) : special::student_t_sf(x * std_t_scale(nu), nu);
}

double std_t_quantile(double p, double nu) {
    return std::isinf(nu) ? special::normal_quantile(p) : special::student_t_quantile(p, nu) / std_t_scale(nu);
}

}  // namespace

SkstConstants constants(double xi, double nu) {
    if (!(xi > 0.0) || !std::isfinite(xi)) {
        throw DomainError("skewness xi must be positive and finite");
    }
    if (!(nu > 2.0)) {
        throw DomainError("degrees of freedom must be > 2");
    }
    SkstConstants k;
    if (std::isinf(nu)) {
        k.mu1 = std::sqrt(2.0 / std::numbers::pi);
        k.c = -kLogSqrt2Pi;
    } else {
        const double log_ratio = special::log_gamma_half_ratio(0.5 * nu);
        k.mu1 = 2.0 * std::sqrt(nu - 2.0) / (nu - 1.0) * std::exp(log_ratio) / std::sqrt(std::numbers::pi);
        k.c = log_ratio - 0.5 * std::log(std::numbers::pi * (nu - 2.0));
    }
    if (xi == 1.0) {
        k.m = 0.0;
        k.s_const = 1.0;
        k.g = 1.0;
        return k;
    }
    const double mu1_sq = k.mu1 * k.mu1;
    k.m = k.mu1 * (xi - 1.0 / xi);
    k.s_const = std::sqrt((1.0 - mu1_sq) * (xi * xi + 1.0 / (xi * xi)) + 2.0 * mu1_sq - 1.0);
    k.g = 2.0 / (xi + 1.0 / xi);
    return k;
}

Kernel::Kernel(const DistParams& shape)
    : family_(shape.family), mu_(shape.mu), xi_(shape.xi), nu_(shape.nu) {
    validate(shape);
    if (family_ == Family::NORM) {
        nu_ = kInfiniteNu;
        k_ = dist::constants(1.0, kInfiniteNu);
        log_norm_ = -kLogSqrt2Pi;
        nu_minus_2_ = kInfiniteNu;
        return;
    }
    k_ = dist::constants(xi_, nu_);
    log_norm_ = std::log(k_.g) + std::log(k_.s_const) + k_.c;
    nu_minus_2_ = nu_ - 2.0;
}

double Kernel::log_density_and_score(double r, double sigma, double& score) const {
    const double u = (r - mu_) / sigma;
    if (family_ == Family::NORM) {
        score = u * u - 1.0;
        return log_norm_ - 0.5 * u * u - std::log(sigma);
    }
    const double z = u * k_.s_const + k_.m;
    // xi* = 1/xi below the mode, xi above, 1 exactly at it.
    const double xs2 = z < 0.0 ? 1.0 / (xi_ * xi_) : (z > 0.0 ? xi_ * xi_ : 1.0);
    const double denom = nu_minus_2_ * xs2;
    score = (nu_ + 1.0) * z * (u * k_.s_const) / (denom + z * z) - 1.0;
    return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(z * z / denom) - std::log(sigma);
}

double Kernel::log_density(double r, double sigma) const {
    double unused = 0.0;
    return log_density_and_score(r, sigma, unused);
}

double Kernel::score(double r, double sigma) const {
    double s = 0.0;
    log_density_and_score(r, sigma, s);
    return s;
}

double Kernel::cdf(double r, double sigma) const {
    const double z = (r - mu_) / sigma * k_.s_const + k_.m;
    const double xi2 = xi_ * xi_;
    if (z < 0.0) {
        return 2.0 / (1.0 + xi2) * std_t_cdf(xi_ * z, nu_);
    }
    return 1.0 - 2.0 * xi2 / (1.0 + xi2) * std_t_sf(z / xi_, nu_);
}

double Kernel::quantile(double prob, double sigma) const {
    if (!(prob > 0.0 && prob < 1.0)) {
        throw DomainError("quantile probability must lie in (0, 1)");
    }
    const double xi2 = xi_ * xi_;
    double z = 0.0;
    if (prob < 1.0 / (1.0 + xi2)) {
        z = std_t_quantile(0.5 * prob * (1.0 + xi2), nu_) / xi_;
    } else {
        const double upper = 0.5 * (1.0 - prob) * (1.0 + xi2) / xi2;
        z = upper >= 0.5 ? 0.0 : -xi_ * std_t_quantile(upper, nu_);
    }
    return mu_ + sigma * (z - k_.m) / k_.s_const;
}

double log_density(double r, const DistParams& p) { return Kernel(p).log_density(r, p.sigma); }

double cdf(double r, const DistParams& p) { return Kernel(p).cdf(r, p.sigma); }

double quantile(double prob, const DistParams& p) { return Kernel(p).quantile(prob, p.sigma); }

double score_logscale(double r, const DistParams& p) { return Kernel(p).score(r, p.sigma); }

std::vector<double> sample(const DistParams& p, std::size_t n, std::uint64_t seed) {
    const Kernel kernel(p);
    const CounterRng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = kernel.quantile(rng.uniform(i), p.sigma);
    }
    return out;
}

}  // namespace dist
}  // namespace gasvar
