#include <doctest.h>

#include <cmath>

#include "ebglm/lbfgs.hpp"

using namespace ebglm;

TEST_CASE("exact quadratic converges in a few iterations") {
    Eigen::VectorXd c(3);
    c << 1.0, -2.0, 0.5;
    const auto f = [&](const Eigen::VectorXd& x) { return 0.5 * (x - c).squaredNorm(); };
    const auto g = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x - c; };
    SolverConfig cfg;
    cfg.grad_tol = 1e-12;
    cfg.obj_rel_tol = 1e-16;
    const LbfgsResult res = lbfgs_minimize(f, g, Eigen::VectorXd::Zero(3), cfg);
    CHECK((res.x - c).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(res.iterations <= 3);
}

TEST_CASE("Rosenbrock from the classic start") {
    const auto f = [](const Eigen::VectorXd& x) {
        const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    const auto g = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd out(2);
        const double b = x[1] - x[0] * x[0];
        out[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * b;
        out[1] = 200.0 * b;
        return out;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    SolverConfig cfg;
    cfg.inner_max_iter = 500;
    cfg.grad_tol = 1e-10;
    cfg.obj_rel_tol = 1e-16;
    const LbfgsResult res = lbfgs_minimize(f, g, x0, cfg);
    CHECK(std::abs(res.x[0] - 1.0) < 1e-6);
    CHECK(std::abs(res.x[1] - 1.0) < 1e-6);
    for (size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i] < res.trace[i - 1]);
}

TEST_CASE("non-finite trial values force backtracking") {
    // f has a wall at x >= 1; the minimizer inside the feasible region is 0.9
    const auto f = [](const Eigen::VectorXd& x) {
        if (x[0] >= 1.0) return std::numeric_limits<double>::infinity();
        return (x[0] - 0.9) * (x[0] - 0.9);
    };
    const auto g = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return 2.0 * (x.array() - 0.9);
    };
    SolverConfig cfg;
    cfg.grad_tol = 1e-10;
    cfg.obj_rel_tol = 1e-15;
    const LbfgsResult res =
        lbfgs_minimize(f, g, Eigen::VectorXd::Constant(1, -3.0), cfg);
    CHECK(std::abs(res.x[0] - 0.9) < 1e-7);
    CHECK(!res.stalled);
}

TEST_CASE("inconsistent gradient ends in a stall, with the best point kept") {
    // gradient points uphill; no step can satisfy Armijo
    const auto f = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
    const auto g = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return -x; };
    SolverConfig cfg;
    const LbfgsResult res =
        lbfgs_minimize(f, g, Eigen::VectorXd::Constant(1, 2.0), cfg);
    CHECK(res.stalled);
    CHECK(res.reason == StopReason::stall);
    CHECK(res.x[0] == 2.0);
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.ls_contraction = 1.5;
    CHECK_THROWS(cfg.validate());
    cfg = SolverConfig{};
    cfg.memory = 0;
    CHECK_THROWS(cfg.validate());
    CHECK_NOTHROW(SolverConfig{}.validate());
}
