#include "doctest.h"

#include "gasvar/backtester.hpp"
#include "gasvar/errors.hpp"
#include "gasvar/rng.hpp"
#include "gasvar/special.hpp"
#include "support/oracles.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>

using namespace gasvar;

namespace {

HitSeries make_hits(std::vector<std::uint8_t> hits, double alpha) {
    HitSeries h;
    h.hits = std::move(hits);
    h.alpha = alpha;
    return h;
}

HitSeries with_count(std::size_t length, std::size_t count, double alpha) {
    std::vector<std::uint8_t> v(length, 0);
    for (std::size_t i = 0; i < count; ++i) v[(i * 37) % length] = 1;
    return make_hits(std::move(v), alpha);
}

HitSeries bernoulli(std::size_t length, double alpha, std::uint64_t seed) {
    const CounterRng rng(seed, 1);
    std::vector<std::uint8_t> v(length);
    for (std::size_t i = 0; i < length; ++i) v[i] = rng.uniform(i) < alpha ? 1 : 0;
    return make_hits(std::move(v), alpha);
}

}  // namespace

TEST_SUITE("backtester") {

TEST_CASE("hit series") {
    const std::vector<double> r{-0.06, -0.01};
    const std::vector<double> var{-0.05, -0.05};
    const auto h = hit_series(r, var, 0.01);
    CHECK(h.hits == std::vector<std::uint8_t>{1, 0});
    CHECK(h.count() == 1);
    CHECK(hit_series(var, var, 0.01).count() == 0);
    CHECK(hit_series(std::vector<double>{0.0, 0.1}, var, 0.01).count() == 0);
    CHECK_THROWS_AS((void)hit_series(r, std::vector<double>{-0.05}, 0.01), DomainError);
}

TEST_CASE("actual over expected") {
    CHECK(ae_ratio(with_count(1000, 0, 0.01)) == 0.0);
    CHECK(ae_ratio(with_count(1000, 10, 0.01)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ae_ratio(with_count(1000, 13, 0.01)) == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("Kupiec unconditional coverage") {
    const auto at_null = kupiec_uc(with_count(1000, 10, 0.01));
    CHECK(at_null.stat == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_null.pvalue == doctest::Approx(1.0).epsilon(1e-9));

    struct Case {
        std::size_t length, count;
        double stat, pvalue;
    };
    // 40-digit reference values.
    for (const Case& c : {Case{250, 5, 1.956809788230629449, 0.16185491719604190907},
                          Case{500, 0, 10.050335853501441394, 0.0015232016983636746651},
                          Case{1000, 13, 0.83057098192071684528, 0.36210747559257085693}}) {
        const auto res = kupiec_uc(with_count(c.length, c.count, 0.01));
        CHECK(res.stat == doctest::Approx(c.stat).epsilon(1e-12));
        CHECK(res.pvalue == doctest::Approx(c.pvalue).epsilon(1e-10));
        CHECK(res.pvalue == doctest::Approx(oracle::chi_square_sf(res.stat, 1)).epsilon(1e-10));
    }
    // Every observation a hit.
    const auto all = kupiec_uc(with_count(100, 100, 0.01));
    CHECK(all.stat == doctest::Approx(-200.0 * std::log(0.01)).epsilon(1e-12));
}

TEST_CASE("Christoffersen conditional coverage") {
    std::vector<std::uint8_t> alt(10);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1 : 0;
    const auto h = make_hits(alt, 0.05);
    // Transitions: 1->0 five times, 0->1 four times; alternative likelihood is 1.
    const double ind = -2.0 * (5.0 * std::log(5.0 / 9.0) + 4.0 * std::log(4.0 / 9.0));
    CHECK(christoffersen_ind_stat(h) == doctest::Approx(ind).epsilon(1e-13));
    const auto cc = christoffersen_cc(h);
    CHECK(cc.stat == doctest::Approx(kupiec_uc(h).stat + ind).epsilon(1e-13));
    CHECK(cc.pvalue == doctest::Approx(oracle::chi_square_sf(cc.stat, 2)).epsilon(1e-10));

    std::vector<std::uint8_t> alt_long(200);
    for (std::size_t i = 0; i < alt_long.size(); ++i) alt_long[i] = i % 2;
    CHECK(christoffersen_cc(make_hits(alt_long, 0.05)).pvalue < 1e-10);

    const auto none = with_count(500, 0, 0.01);
    CHECK(christoffersen_ind_stat(none) == 0.0);
    CHECK(christoffersen_cc(none).stat == doctest::Approx(kupiec_uc(none).stat).epsilon(1e-14));
    CHECK_THROWS_AS((void)christoffersen_cc(make_hits({1}, 0.05)), DomainError);
}

TEST_CASE("dynamic quantile test against normal equations") {
    const auto h = bernoulli(300, 0.1, 3);
    const CounterRng noise(8, 2);
    std::vector<double> var(300);
    for (std::size_t i = 0; i < var.size(); ++i) var[i] = -0.02 - 0.01 * noise.uniform(i);

    const auto dq = dq_test(h, var, 4);
    CHECK(dq.degrees_of_freedom == 6);
    CHECK_FALSE(dq.rank_deficient);

    const int rows = 296;
    Eigen::MatrixXd x(rows, 6);
    Eigen::VectorXd y(rows);
    for (int r = 0; r < rows; ++r) {
        const int s = r + 4;
        x(r, 0) = 1.0;
        for (int l = 1; l <= 4; ++l) x(r, l) = h.hits[s - l] - 0.1;
        x(r, 5) = var[s];
        y[r] = h.hits[s] - 0.1;
    }
    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::VectorXd b = xtx.ldlt().solve(x.transpose() * y);
    const double stat = b.dot(xtx * b) / (0.1 * 0.9);
    CHECK(dq.stat == doctest::Approx(stat).epsilon(1e-9));
    CHECK(dq.pvalue == doctest::Approx(oracle::chi_square_sf(stat, 6)).epsilon(1e-9));
}

TEST_CASE("dynamic quantile test edge cases") {
    CHECK(special::chi_square_sf(0.0, 6.0) == 1.0);
    // No hits: the lag columns are constant, so the design is rank deficient.
    const auto none = with_count(200, 0, 0.01);
    std::vector<double> var(200);
    for (std::size_t i = 0; i < var.size(); ++i) var[i] = -0.03 - 1e-4 * static_cast<double>(i % 7);
    const auto dq = dq_test(none, var, 4);
    CHECK(dq.rank_deficient);
    CHECK(std::isfinite(dq.stat));
    CHECK(dq.stat >= 0.0);
    CHECK(dq.pvalue >= 0.0);
    CHECK(dq.pvalue <= 1.0);
    CHECK_THROWS_AS((void)dq_test(with_count(6, 1, 0.05), std::vector<double>(6, -0.02), 4), DomainError);
    CHECK_THROWS_AS((void)dq_test(none, std::vector<double>(10, -0.02), 4), DomainError);
}

TEST_CASE("quantile loss") {
    const auto at_var = quantile_loss(std::vector<double>{-0.05}, std::vector<double>{-0.05}, 0.05);
    CHECK(at_var.mean == 0.0);
    const auto ql = quantile_loss(std::vector<double>{-0.02, -0.08}, std::vector<double>{-0.05, -0.05}, 0.05);
    CHECK(ql.series[0] == doctest::Approx(0.0015).epsilon(1e-12));
    CHECK(ql.series[1] == doctest::Approx(0.0285).epsilon(1e-12));
    CHECK(ql.mean == doctest::Approx(0.015).epsilon(1e-12));

    CHECK(ql_ratio(0.0012, 0.0015) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(ql_ratio(0.003, 0.003) == 1.0);
    CHECK_THROWS_AS((void)ql_ratio(0.001, 0.0), DomainError);

    // Among constant forecasts the mean loss is smallest at the sample quantile.
    std::vector<double> r{0.012, -0.03, 0.004, -0.011, 0.02, -0.002, 0.007, -0.045, 0.001, 0.015,
                          -0.008, 0.003, -0.019, 0.009, 0.0, -0.004, 0.026, -0.013, 0.005, -0.001};
    const double alpha = 0.1;
    double best_c = 0.0, best = 1e300;
    for (int i = -6000; i <= 3000; ++i) {
        const double c = i * 1e-5;
        const double loss = quantile_loss(r, std::vector<double>(r.size(), c), alpha).mean;
        if (loss < best - 1e-15) {
            best = loss;
            best_c = c;
        }
    }
    auto sorted = r;
    std::sort(sorted.begin(), sorted.end());
    // With 20 points and alpha = 0.1 every c in [x_(2), x_(3)] is a minimiser.
    CHECK(best_c >= sorted[1] - 1e-12);
    CHECK(best_c <= sorted[2] + 1e-12);
}

TEST_CASE("absolute deviation over violations") {
    const std::vector<double> var{-0.05, -0.05, -0.05};
    const std::vector<double> calm{0.01, -0.02, 0.0};
    auto ad = absolute_deviation(calm, var, hit_series(calm, var, 0.05));
    CHECK(ad.mean == 0.0);
    CHECK(ad.max == 0.0);

    const std::vector<double> one{0.01, -0.08, 0.0};
    ad = absolute_deviation(one, var, hit_series(one, var, 0.05));
    CHECK(ad.mean == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(ad.max == doctest::Approx(0.03).epsilon(1e-12));

    const std::vector<double> two{-0.06, 0.3, -0.08};
    ad = absolute_deviation(two, var, hit_series(two, var, 0.05));
    CHECK(ad.mean == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(ad.max == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("ordering sensitivity") {
    // Same counts, clustered vs spread out.
    std::vector<std::uint8_t> clustered(400, 0), spread(400, 0);
    for (int i = 0; i < 8; ++i) {
        clustered[100 + i] = 1;
        spread[i * 50 + 7] = 1;
    }
    const auto c = make_hits(clustered, 0.02);
    const auto s = make_hits(spread, 0.02);
    CHECK(kupiec_uc(c).stat == kupiec_uc(s).stat);
    CHECK(christoffersen_cc(c).stat > christoffersen_cc(s).stat + 10.0);
    const std::vector<double> var(400, -0.03);
    CHECK(dq_test(c, var).stat > dq_test(s, var).stat);
}

TEST_CASE("full report is consistent with the individual pieces") {
    const CounterRng rng(21, 0);
    std::vector<double> r(500), var(500);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = 0.02 * (rng.uniform(2 * i) - 0.5) * 6.0;
        var[i] = -0.045 + 0.005 * rng.uniform(2 * i + 1);
    }
    const auto rep = backtest(r, var, 0.05, 4);
    const auto h = hit_series(r, var, 0.05);
    CHECK(rep.length == 500);
    CHECK(rep.hits == h.count());
    CHECK(rep.ae == ae_ratio(h));
    CHECK(rep.uc.stat == kupiec_uc(h).stat);
    CHECK(rep.cc.stat == christoffersen_cc(h).stat);
    CHECK(rep.dq.stat == dq_test(h, var, 4).stat);
    CHECK(rep.ql.mean == quantile_loss(r, var, 0.05).mean);
    CHECK(rep.ad.max >= rep.ad.mean);
    for (const double q : rep.ql.series) CHECK(q >= 0.0);
}

TEST_CASE("Monte-Carlo size under correct coverage") {
    constexpr int kReps = 2000;
    constexpr std::size_t kLength = 1000;
    const double alpha = 0.05;
    int cc_rejects = 0, dq_rejects = 0;
    for (int rep = 0; rep < kReps; ++rep) {
        const auto h = bernoulli(kLength, alpha, 5000 + rep);
        const CounterRng noise(9000 + rep, 3);
        std::vector<double> var(kLength);
        for (std::size_t i = 0; i < kLength; ++i) var[i] = -0.02 + 0.005 * (noise.uniform(i) - 0.5);
        if (christoffersen_cc(h).pvalue < 0.05) ++cc_rejects;
        if (dq_test(h, var, 4).pvalue < 0.05) ++dq_rejects;
    }
    const double cc_size = static_cast<double>(cc_rejects) / kReps;
    const double dq_size = static_cast<double>(dq_rejects) / kReps;
    MESSAGE("CC size " << cc_size << ", DQ size " << dq_size);
    CHECK(cc_size >= 0.03);
    CHECK(cc_size <= 0.07);
    CHECK(dq_size >= 0.03);
    CHECK(dq_size <= 0.08);
}

}
