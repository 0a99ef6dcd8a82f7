#include "doctest.h"

#include "gasvar/optimizer.hpp"

#include <cmath>
#include <limits>

using namespace gasvar::optim;

TEST_SUITE("optimizer") {

TEST_CASE("BFGS solves the Rosenbrock valley") {
    const Objective rosen = [](const Eigen::VectorXd& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    const auto r = minimize_bfgs(rosen, x0);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.value <= rosen(x0));
}

TEST_CASE("badly scaled quadratic") {
    const Objective quad = [](const Eigen::VectorXd& x) {
        return 0.5 * (1e3 * x[0] * x[0] + 1e-1 * x[1] * x[1] + x[2] * x[2]) + x[0] - x[2];
    };
    const auto r = minimize_bfgs(quad, Eigen::VectorXd::Constant(3, 2.0));
    CHECK(r.reason == StopReason::Gradient);
    CHECK(r.x[0] == doctest::Approx(-1e-3).epsilon(1e-5));
    CHECK(std::abs(r.x[1]) < 1e-3);
    CHECK(r.x[2] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("infeasible regions are avoided by the line search") {
    // log barrier: +inf for x <= 0, minimum at x = 1.
    const Objective barrier = [](const Eigen::VectorXd& x) {
        return x[0] > 0.0 ? x[0] - std::log(x[0]) : std::numeric_limits<double>::infinity();
    };
    const auto r = minimize_bfgs(barrier, Eigen::VectorXd::Constant(1, 0.05));
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));

    const auto bad = minimize_bfgs(barrier, Eigen::VectorXd::Constant(1, -1.0));
    CHECK(bad.reason == StopReason::NonFiniteStart);
    CHECK_FALSE(bad.converged);
}

TEST_CASE("iteration cap reports non-convergence") {
    const Objective rosen = [](const Eigen::VectorXd& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    BfgsOptions opts;
    opts.max_iterations = 3;
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    const auto r = minimize_bfgs(rosen, x0, opts);
    CHECK(r.reason == StopReason::MaxIterations);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
}

TEST_CASE("finite-difference derivatives of a smooth function") {
    const Objective f = [](const Eigen::VectorXd& x) { return std::sin(x[0]) * std::exp(x[1]); };
    Eigen::VectorXd x(2);
    x << 0.3, -0.2;
    const auto g = central_gradient(f, x, 1e-6);
    CHECK(g[0] == doctest::Approx(std::cos(0.3) * std::exp(-0.2)).epsilon(1e-8));
    CHECK(g[1] == doctest::Approx(std::sin(0.3) * std::exp(-0.2)).epsilon(1e-8));
    const auto h = central_hessian(f, x, 1e-4);
    CHECK(h(0, 0) == doctest::Approx(-std::sin(0.3) * std::exp(-0.2)).epsilon(1e-6));
    CHECK(h(0, 1) == doctest::Approx(std::cos(0.3) * std::exp(-0.2)).epsilon(1e-6));
    CHECK(h(1, 0) == h(0, 1));
}

}
