#include "gasvar/special.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace gasvar::special {

double log_gamma_half_ratio(double x) {
    if (x < 20.0) {
        return boost::math::lgamma(x + 0.5) - boost::math::lgamma(x);
    }
    // Stirling series of the difference; truncation error < 1e-16 for x >= 20.
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double tail =
        inv * (-1.0 / 8.0 +
               inv2 * (1.0 / 192.0 +
                       inv2 * (-1.0 / 640.0 + inv2 * (17.0 / 14336.0 + inv2 * (-341.0 / 202752.0)))));
    return 0.5 * std::log(x) + tail;
}

double student_t_cdf(double x, double df) {
    return boost::math::cdf(boost::math::students_t_distribution<double>(df), x);
}

double student_t_sf(double x, double df) {
    return boost::math::cdf(boost::math::complement(boost::math::students_t_distribution<double>(df), x));
}

double student_t_quantile(double p, double df) {
    return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal_distribution<double>(), p); }

double chi_square_sf(double x, double df) {
    if (x <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace gasvar::special
