#include <doctest.h>

#include <cmath>

#include "ebglm/metrics.hpp"
#include "ebglm/objective.hpp"
#include "ebglm/rng.hpp"
#include "ebglm/simulate.hpp"
#include "ebglm/solver.hpp"
#include "ebglm/special.hpp"

using namespace ebglm;

namespace {

Dataset identity_gaussian(int n, std::uint64_t seed) {
    Dataset d;
    d.has_intercept = false;
    d.X = Eigen::MatrixXd::Identity(n, n);
    Rng rng(seed);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) d.y[i] = 1.5 * rng.normal();
    for (int j = 0; j < n; ++j) d.names.push_back("x" + std::to_string(j + 1));
    return d;
}

}  // namespace

TEST_CASE("conjugate gaussian fit recovers the exact posterior mean") {
    const Dataset d = identity_gaussian(20, 7);
    SolverConfig cfg;
    cfg.grad_tol = 1e-9;
    cfg.obj_rel_tol = 1e-12;
    FitOptions opts;
    opts.optimize_prior = false;
    const FitResult res = fit(d, Family::gaussian(1.0), PointNormal{0.0, 1.0}, cfg, opts);
    for (int j = 0; j < 20; ++j)
        CHECK(std::abs(res.theta[j] - d.y[j] / 2.0) < 1e-7);
    CHECK(res.report.converged);
    CHECK(res.elbo == doctest::Approx(-res.objective_trace.back()));
}

TEST_CASE("live objective trace is nonincreasing") {
    SimConfig sim;
    sim.n = 120;
    sim.p = 30;
    sim.s = 5;
    sim.n_test = 0;
    sim.seed = 31;
    const Dataset d = simulate(sim).train_dataset();
    SolverConfig cfg;
    const FitResult res = fit(d, Family::bernoulli(), PointNormal{0.5, 1.0}, cfg);
    REQUIRE(res.objective_trace.size() >= 2);
    for (size_t t = 1; t < res.objective_trace.size(); ++t)
        CHECK(res.objective_trace[t] <= res.objective_trace[t - 1]);
}

TEST_CASE("frozen gradient is small at inner convergence") {
    SimConfig sim;
    sim.n = 80;
    sim.p = 12;
    sim.s = 4;
    sim.n_test = 0;
    sim.seed = 13;
    const Dataset d = simulate(sim).train_dataset();
    SolverConfig cfg;
    cfg.grad_tol = 1e-6;
    cfg.obj_rel_tol = 1e-15;  // make the gradient test the binding stop
    cfg.inner_max_iter = 2000;
    const FitResult res = fit(d, Family::bernoulli(), PointNormal{0.5, 1.0}, cfg);
    Objective obj(d, Family::bernoulli(), res.prior_hat, true, cfg.root_tol);
    const Eigen::VectorXd x = obj.pack(res.theta_fit, res.prior_hat);
    const Eigen::VectorXd s2 = compute_s2(d, Family::bernoulli(), res.theta_fit);
    CHECK(obj.gradient(x, s2).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("reproducibility: identical inputs give bitwise-identical fits") {
    SimConfig sim;
    sim.n = 60;
    sim.p = 10;
    sim.s = 3;
    sim.n_test = 0;
    sim.seed = 99;
    const Dataset d = simulate(sim).train_dataset();
    SolverConfig cfg;
    const FitResult a = fit(d, Family::bernoulli(), PointNormal{0.5, 1.0}, cfg);
    const FitResult b = fit(d, Family::bernoulli(), PointNormal{0.5, 1.0}, cfg);
    REQUIRE(a.theta.size() == b.theta.size());
    for (int j = 0; j < a.theta.size(); ++j) CHECK(a.theta[j] == b.theta[j]);
}

TEST_CASE("permutation equivariance of the fitted coefficients") {
    SimConfig sim;
    sim.n = 50;
    sim.p = 5;
    sim.s = 2;
    sim.family = Family::gaussian(1.0);
    sim.n_test = 0;
    sim.seed = 123;
    const SimData data = simulate(sim);
    Dataset d = data.train_dataset();

    SolverConfig cfg;
    cfg.grad_tol = 1e-12;
    cfg.obj_rel_tol = 1e-15;
    cfg.inner_max_iter = 2000;
    const FitResult base = fit(d, sim.family, PointNormal{0.5, 1.0}, cfg);

    // rotate the feature columns (intercept stays first)
    Dataset perm = d;
    const int p = d.p();
    for (int j = 1; j < p; ++j) {
        const int src = 1 + (j % (p - 1));
        perm.X.col(j) = d.X.col(src);
        perm.names[j] = d.names[src];
    }
    const FitResult rotated = fit(perm, sim.family, PointNormal{0.5, 1.0}, cfg);
    CHECK(std::abs(rotated.theta[0] - base.theta[0]) < 1e-10);
    for (int j = 1; j < p; ++j) {
        const int src = 1 + (j % (p - 1));
        CHECK(std::abs(rotated.theta[j] - base.theta[src]) < 1e-10);
    }
}

TEST_CASE("null data pushes the spike weight toward one") {
    SimConfig sim;
    sim.n = 200;
    sim.p = 40;
    sim.s = 0;
    sim.n_test = 0;
    sim.seed = 8;
    const Dataset d = simulate(sim).train_dataset();
    SolverConfig cfg;
    const FitResult res = fit(d, Family::bernoulli(), PointNormal{0.5, 1.0}, cfg);
    const auto* pn = std::get_if<PointNormal>(&res.prior_hat);
    REQUIRE(pn != nullptr);
    CHECK(pn->pi0 > 0.8);
    CHECK(res.theta.tail(40).lpNorm<Eigen::Infinity>() < 0.2);
}

TEST_CASE("predict") {
    // theta = 0 logistic model: all response predictions are 1/2
    SimConfig sim;
    sim.n = 30;
    sim.p = 3;
    sim.s = 1;
    sim.n_test = 4;
    sim.seed = 77;
    const SimData data = simulate(sim);
    const Dataset d = data.train_dataset();
    FitResult zero;
    zero.theta = Eigen::VectorXd::Zero(d.p());
    zero.family = Family::bernoulli();
    zero.has_intercept = true;
    const Eigen::VectorXd resp = predict(zero, data.X_test, PredictKind::response);
    for (int i = 0; i < resp.size(); ++i) CHECK(resp[i] == 0.5);

    // gaussian: link and response coincide
    zero.family = Family::gaussian(1.0);
    Rng rng(4);
    zero.theta = Eigen::VectorXd::Zero(d.p());
    for (int j = 0; j < d.p(); ++j) zero.theta[j] = rng.normal();
    const Eigen::VectorXd link = predict(zero, data.X_test, PredictKind::link);
    const Eigen::VectorXd mean = predict(zero, data.X_test, PredictKind::response);
    for (int i = 0; i < link.size(); ++i) CHECK(link[i] == mean[i]);

    // logistic response at eta = 2
    FitResult one;
    one.theta = Eigen::VectorXd::Constant(1, 2.0);
    one.family = Family::bernoulli();
    one.has_intercept = false;
    Eigen::MatrixXd row(1, 1);
    row << 1.0;
    CHECK(std::abs(predict(one, row, PredictKind::response)[0] - 0.8808) < 1e-4);

    // dimension mismatch
    Eigen::MatrixXd wrong(2, 7);
    wrong.setOnes();
    CHECK_THROWS_AS(predict(zero, wrong, PredictKind::link), ConfigError);
}

TEST_CASE("standardized fit maps back to the original scale") {
    SimConfig sim;
    sim.n = 150;
    sim.p = 6;
    sim.s = 3;
    sim.family = Family::gaussian(1.0);
    sim.n_test = 20;
    sim.seed = 55;
    const SimData data = simulate(sim);
    Dataset raw = data.train_dataset();
    Dataset scaled = raw;
    // make the columns badly scaled, then let standardize undo it
    for (int j = 1; j < scaled.p(); ++j) scaled.X.col(j) *= std::pow(10.0, j - 3);
    Dataset std_view = scaled;
    standardize(std_view);

    SolverConfig cfg;
    cfg.grad_tol = 1e-9;
    cfg.obj_rel_tol = 1e-13;
    const FitResult on_std = fit(std_view, sim.family, PointNormal{0.5, 1.0}, cfg);

    Eigen::MatrixXd Xtest = data.X_test;
    for (int j = 1; j < scaled.p(); ++j) Xtest.col(j - 1) *= std::pow(10.0, j - 3);
    const Eigen::VectorXd pred = predict(on_std, Xtest, PredictKind::response);

    // the same model fit on the already-standardized design, predicting on
    // manually standardized features, must agree
    Dataset direct = std_view;
    const FitResult ref = fit(direct, sim.family, PointNormal{0.5, 1.0}, cfg);
    Eigen::MatrixXd Xtest_std = Xtest;
    for (int j = 1; j < scaled.p(); ++j)
        Xtest_std.col(j - 1) = (Xtest.col(j - 1).array() -
                                std_view.standardization->center[j]) /
                               std_view.standardization->scale[j];
    FitResult ref_nostd = ref;
    ref_nostd.standardization.reset();
    ref_nostd.theta = ref.theta_fit;
    const Eigen::VectorXd pred_ref = predict(ref_nostd, Xtest_std, PredictKind::response);
    for (int i = 0; i < pred.size(); ++i)
        CHECK(pred[i] == doctest::Approx(pred_ref[i]).epsilon(1e-9));
}
