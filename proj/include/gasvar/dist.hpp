#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace gasvar {

/// Conditional distribution family. NORM and STD are the xi = 1 (and nu = inf) special cases of SSTD.
enum class Family { NORM, STD, SSTD };

[[nodiscard]] std::string_view to_string(Family f) noexcept;
/// Accepts "norm", "std", "sstd". Throws InputError otherwise.
[[nodiscard]] Family parse_family(std::string_view label);

/// Degrees of freedom of the Normal family.
inline constexpr double kInfiniteNu = std::numeric_limits<double>::infinity();

/// Location-scale skew-Student-t parameters, standardized so that the mean is
/// `mu` and the standard deviation is `sigma`.
struct DistParams {
    Family family = Family::NORM;
    double mu = 0.0;
    double sigma = 1.0;
    double xi = 1.0;
    double nu = kInfiniteNu;

    static DistParams normal(double mu, double sigma) { return {Family::NORM, mu, sigma, 1.0, kInfiniteNu}; }
    static DistParams student(double mu, double sigma, double nu) { return {Family::STD, mu, sigma, 1.0, nu}; }
    static DistParams skew_student(double mu, double sigma, double xi, double nu) {
        return {Family::SSTD, mu, sigma, xi, nu};
    }
};

/// Throws DomainError unless sigma > 0, xi > 0, nu > 2 and the family pins hold.
void validate(const DistParams& p);

/// Shape constants of the standardized skew-Student-t; functions of (xi, nu) only.
struct SkstConstants {
    double mu1 = 0.0;      ///< E|T| for a unit-variance Student-t T
    double m = 0.0;        ///< mean of the unstandardized skewed variate
    double s_const = 1.0;  ///< its standard deviation
    double g = 1.0;        ///< 2 / (xi + 1/xi)
    double c = 0.0;        ///< log normalizer of the unit-variance Student-t
};

namespace dist {

/// nu may be kInfiniteNu (Normal kernel).
[[nodiscard]] SkstConstants constants(double xi, double nu);

[[nodiscard]] double log_density(double r, const DistParams& p);
[[nodiscard]] double cdf(double r, const DistParams& p);
[[nodiscard]] double quantile(double prob, const DistParams& p);
/// d log f(r) / d log(sigma).
[[nodiscard]] double score_logscale(double r, const DistParams& p);
/// Inverse-transform draws; draw i uses counter i of CounterRng(seed).
[[nodiscard]] std::vector<double> sample(const DistParams& p, std::size_t n, std::uint64_t seed);

/// Precomputed evaluator for a fixed (family, mu, xi, nu) and varying scale.
/// Used by the filter, where the scale changes at every step.
class Kernel {
public:
    explicit Kernel(const DistParams& shape);

    [[nodiscard]] double log_density(double r, double sigma) const;
    [[nodiscard]] double score(double r, double sigma) const;
    /// Both at once; returns log density and writes the score.
    double log_density_and_score(double r, double sigma, double& score) const;

    [[nodiscard]] double cdf(double r, double sigma) const;
    [[nodiscard]] double quantile(double prob, double sigma) const;

    [[nodiscard]] const SkstConstants& constants() const noexcept { return k_; }

private:
    Family family_;
    double mu_;
    double xi_;
    double nu_;
    SkstConstants k_;
    double log_norm_;    // log g + log s + c
    double nu_minus_2_;
};

}  // namespace dist
}  // namespace gasvar
