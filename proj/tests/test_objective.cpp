#include <doctest.h>

#include <cmath>

#include "ebglm/errors.hpp"
#include "ebglm/objective.hpp"
#include "ebglm/penalty.hpp"
#include "ebglm/rng.hpp"
#include "ebglm/simulate.hpp"
#include "ebglm/special.hpp"

using namespace ebglm;

namespace {

Dataset tiny_logistic() {
    Dataset d;
    d.has_intercept = false;
    d.X = Eigen::MatrixXd::Ones(4, 1);
    d.y = Eigen::Vector4d(1, 0, 1, 0);
    d.names = {"x1"};
    return d;
}

}  // namespace

TEST_CASE("compute_s2 values") {
    const Dataset d = tiny_logistic();
    const Eigen::VectorXd s2 =
        compute_s2(d, Family::bernoulli(), Eigen::VectorXd::Zero(1));
    CHECK(s2[0] == doctest::Approx(1.0).epsilon(1e-14));  // 1/(4 * 0.25)

    // gaussian: s2 = sigma2 / colsq independent of theta
    SimConfig cfg;
    cfg.n = 30;
    cfg.p = 4;
    cfg.s = 2;
    cfg.family = Family::gaussian(2.5);
    cfg.n_test = 0;
    cfg.seed = 9;
    const Dataset g = simulate(cfg).train_dataset();
    const Eigen::VectorXd a = compute_s2(g, cfg.family, Eigen::VectorXd::Zero(5));
    const Eigen::VectorXd b = compute_s2(g, cfg.family, Eigen::VectorXd::Ones(5));
    for (int j = 0; j < 5; ++j) {
        CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-14));
        CHECK(a[j] == doctest::Approx(2.5 / g.X.col(j).squaredNorm()).epsilon(1e-12));
    }

    const Eigen::VectorXd s2p =
        compute_s2(d, Family::poisson(), Eigen::VectorXd::Zero(1));
    CHECK(s2p[0] == doctest::Approx(0.25).epsilon(1e-14));  // 1 / (4 * exp(0))
}

TEST_CASE("objective at zero with a near-pure spike is n log 2") {
    SimConfig cfg;
    cfg.n = 20;
    cfg.p = 5;
    cfg.s = 2;
    cfg.n_test = 0;
    cfg.seed = 3;
    const Dataset d = simulate(cfg).train_dataset();
    const Prior spike = PointNormal{1.0 - 1e-8, 1.0};
    Objective obj(d, Family::bernoulli(), spike, false);
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(obj.dim());
    CHECK(std::abs(obj.value_live(x) - 20.0 * std::log(2.0)) < 1e-6);
}

TEST_CASE("gaussian identity design reduces to the ridge closed form") {
    const int n = 12;
    Dataset d;
    d.has_intercept = false;
    d.X = Eigen::MatrixXd::Identity(n, n);
    Rng rng(17);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) d.y[i] = rng.normal();
    for (int j = 0; j < n; ++j) d.names.push_back("x");

    const double sg = 1.7;  // slab variance
    Objective obj(d, Family::gaussian(1.0), PointNormal{0.0, sg}, false);
    Eigen::VectorXd theta(n);
    for (int j = 0; j < n; ++j) theta[j] = 0.3 * std::cos(j + 1.0);

    double want = -d.y.squaredNorm() / 2.0;
    for (int j = 0; j < n; ++j)
        want += 0.5 * (theta[j] - d.y[j]) * (theta[j] - d.y[j]) +
                theta[j] * theta[j] / (2.0 * sg) + 0.5 * std::log((sg + 1.0) / 1.0);
    CHECK(obj.value_live(theta) == doctest::Approx(want).epsilon(1e-10));

    // gradient vanishes exactly at the conjugate posterior mean
    const Eigen::VectorXd star = d.y * sg / (sg + 1.0);
    const Eigen::VectorXd s2 = compute_s2(d, Family::gaussian(1.0), star);
    CHECK(obj.gradient(star, s2).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("live and frozen objectives agree at the freezing point") {
    SimConfig cfg;
    cfg.n = 40;
    cfg.p = 6;
    cfg.s = 3;
    cfg.n_test = 0;
    cfg.seed = 5;
    const Dataset d = simulate(cfg).train_dataset();
    Objective obj(d, Family::bernoulli(), PointNormal{0.5, 1.0}, true);
    Eigen::VectorXd x = obj.pack(Eigen::VectorXd::Zero(d.p()), PointNormal{0.5, 1.0});
    for (int j = 0; j < d.p(); ++j) x[j] = 0.2 * std::sin(j + 1.0);
    const Eigen::VectorXd s2 = compute_s2(d, Family::bernoulli(), obj.theta_of(x));
    CHECK(obj.value(x, s2) == obj.value_live(x));
}

TEST_CASE("gradient matches central differences of the frozen objective") {
    for (const Family& family :
         {Family::gaussian(1.5), Family::bernoulli(), Family::poisson()}) {
        for (const Prior& prior :
             {Prior(PointNormal{0.5, 2.0}), Prior(PointLaplace{0.3, 1.0}),
              Prior(make_uniform_ash(50, 6))}) {
            SimConfig cfg;
            cfg.n = 50;
            cfg.p = 10;
            cfg.s = 3;
            cfg.family = family;
            cfg.n_test = 0;
            cfg.seed = 77;
            const Dataset d = simulate(cfg).train_dataset();
            Objective obj(d, family, prior, true, 1e-12);
            Eigen::VectorXd theta(d.p());
            for (int j = 0; j < d.p(); ++j) theta[j] = 0.25 * std::sin(1.0 + 2.0 * j);
            const Eigen::VectorXd x = obj.pack(theta, prior);
            const Eigen::VectorXd s2 = compute_s2(d, family, theta);
            const Eigen::VectorXd g = obj.gradient(x, s2);
            const double h = 1e-6;
            for (int k = 0; k < obj.dim(); ++k) {
                Eigen::VectorXd xp = x, xm = x;
                xp[k] += h;
                xm[k] -= h;
                const double fd = (obj.value(xp, s2) - obj.value(xm, s2)) / (2 * h);
                CHECK(std::abs(fd - g[k]) <= 1e-5 * std::max(1.0, std::abs(g[k])));
            }
        }
    }
}

TEST_CASE("penalty gradient is zero at theta = 0") {
    const Dataset d = tiny_logistic();
    Objective obj(d, Family::bernoulli(), PointNormal{0.5, 1.0}, false);
    const Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd s2 = compute_s2(d, Family::bernoulli(), theta);
    // balanced data: sum_i (y_i - 0.5) x_i = 0, so the whole gradient is 0
    CHECK(obj.gradient(theta, s2).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("intercept shifts only the likelihood part") {
    SimConfig cfg;
    cfg.n = 30;
    cfg.p = 4;
    cfg.s = 2;
    cfg.n_test = 0;
    cfg.seed = 21;
    const Dataset d = simulate(cfg).train_dataset();  // has intercept column
    Objective obj(d, Family::bernoulli(), PointNormal{0.5, 1.0}, false);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(d.p());
    theta.tail(4) = Eigen::Vector4d(0.4, -0.2, 0.1, 0.3);
    const Eigen::VectorXd s2 = compute_s2(d, Family::bernoulli(), theta);
    for (double c : {0.0, 2.0, 25.0}) {
        theta[0] = c;
        const double penalty_part =
            obj.value(theta, s2) - negative_loglik(d, Family::bernoulli(), theta);
        theta[0] = 0.0;
        const double base =
            obj.value(theta, s2) - negative_loglik(d, Family::bernoulli(), theta);
        CHECK(penalty_part == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("poisson overflow yields the +inf sentinel, not a trap") {
    const Dataset d = tiny_logistic();
    Objective obj(d, Family::poisson(), PointNormal{0.5, 1.0}, false);
    Eigen::VectorXd theta(1);
    theta[0] = 800.0;
    const Eigen::VectorXd s2 = Eigen::VectorXd::Ones(1);
    CHECK(std::isinf(obj.value(theta, s2)));
    CHECK(std::isinf(obj.value_live(theta)));
}

TEST_CASE("degenerate columns rejected") {
    Dataset d;
    d.has_intercept = true;
    d.X = Eigen::MatrixXd::Ones(5, 3);
    d.X.col(1).setZero();
    d.y = Eigen::VectorXd::Zero(5);
    d.names = {"(intercept)", "a", "b"};
    CHECK_THROWS_AS(validate_dataset(d), ConfigError);  // all-zero column
    d.X.col(1).setConstant(3.0);
    CHECK_THROWS_AS(validate_dataset(d), ConfigError);  // constant vs intercept
    Rng rng(4);
    for (int i = 0; i < 5; ++i) d.X(i, 1) = rng.normal();
    for (int i = 0; i < 5; ++i) d.X(i, 2) = rng.normal();
    CHECK_NOTHROW(validate_dataset(d));
}
