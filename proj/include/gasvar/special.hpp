#pragma once

// Special functions used by the distribution and backtest code.

namespace gasvar::special {

/// log Gamma(x + 1/2) - log Gamma(x) for x > 0, stable for very large x.
double log_gamma_half_ratio(double x);

/// CDF of the Student-t distribution with `df` degrees of freedom (unit scale, not standardized).
double student_t_cdf(double x, double df);
/// Upper tail 1 - student_t_cdf(x, df), without cancellation.
double student_t_sf(double x, double df);
double student_t_quantile(double p, double df);

double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double p);

/// Upper tail probability of a chi-square variate with `df` degrees of freedom.
double chi_square_sf(double x, double df);

}  // namespace gasvar::special
