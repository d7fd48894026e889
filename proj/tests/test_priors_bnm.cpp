#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "ebglm/bnm.hpp"
#include "ebglm/errors.hpp"
#include "ebglm/oracle.hpp"
#include "ebglm/special.hpp"

using namespace ebglm;

namespace {

double npdf(double z, double v) { return std::exp(log_normal_pdf(z, 0.0, v)); }

std::vector<std::pair<std::string, Prior>> shipped_priors() {
    return {{"point-normal", PointNormal{0.5, 2.0}},
            {"point-laplace", PointLaplace{0.3, 1.0}},
            {"ash", make_uniform_ash(500, 20)}};
}

}  // namespace

TEST_CASE("marginal log-likelihood values") {
    // pure spike reduces to the N(0, s2) density
    CHECK(marginal_loglik(0.0, PointNormal{1.0, 1.0}, 1.0) ==
          doctest::Approx(log_normal_pdf(0.0, 0.0, 1.0)).epsilon(1e-12));
    // two-component arithmetic
    const double want = std::log(0.5 * npdf(0.0, 1.0) + 0.5 * npdf(0.0, 2.0));
    CHECK(marginal_loglik(0.0, PointNormal{0.5, 1.0}, 1.0) ==
          doctest::Approx(want).epsilon(1e-12));
    // point-Laplace against the quadrature oracle
    const Prior pl = PointLaplace{0.3, 1.0};
    CHECK(std::abs(marginal_loglik(1.5, pl, 0.5) - oracle::marginal_loglik(1.5, pl, 0.5)) <
          1e-8);
    CHECK_THROWS_AS(marginal_loglik(std::nan(""), pl, 1.0), NumericError);
    CHECK_THROWS_AS(marginal_loglik(0.0, pl, -1.0), NumericError);
}

TEST_CASE("marginal score values and finite differences") {
    for (const auto& [name, prior] : shipped_priors()) {
        CAPTURE(name);
        CHECK(marginal_loglik_d1(0.0, prior, 0.7) == doctest::Approx(0.0).epsilon(1e-12));
    }
    // single-Gaussian marginal N(0, s2 + sigma2)
    CHECK(marginal_loglik_d1(2.0, PointNormal{0.0, 1.0}, 1.0) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    const double h = 1e-5;
    for (const auto& [name, prior] : shipped_priors()) {
        CAPTURE(name);
        for (double s2 : {0.3, 1.0, 7.0})
            for (double z : {-6.0, -1.2, 0.4, 2.0, 9.0}) {
                const double an = marginal_loglik_d1(z, prior, s2);
                const double fd = (marginal_loglik(z + h, prior, s2) -
                                   marginal_loglik(z - h, prior, s2)) /
                                  (2 * h);
                CHECK(std::abs(an - fd) <= 1e-5 * std::max(1.0, std::abs(an)));
            }
    }
}

TEST_CASE("posterior mean: symmetry, conjugate case, mixture weighting") {
    for (const auto& [name, prior] : shipped_priors())
        CHECK(posterior_mean(0.0, prior, 2.0) == 0.0);
    CHECK(posterior_mean(2.0, PointNormal{0.0, 1.0}, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // slab posterior weight times the conjugate mean
    const double w =
        0.5 * npdf(2.0, 2.0) / (0.5 * npdf(2.0, 1.0) + 0.5 * npdf(2.0, 2.0));
    CHECK(posterior_mean(2.0, PointNormal{0.5, 1.0}, 1.0) ==
          doctest::Approx(w * 1.0).epsilon(1e-10));
}

TEST_CASE("posterior variance: conjugate case, spike limit, quadrature") {
    CHECK(posterior_variance(2.0, PointNormal{0.0, 1.0}, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(posterior_variance(0.0, PointNormal{1.0 - 1e-8, 1.0}, 1.0) < 1e-6);
    for (const auto& [name, prior] : shipped_priors()) {
        CAPTURE(name);
        for (double z : {0.0, 1.7, -4.0})
            CHECK(std::abs(posterior_variance(z, prior, 0.6) -
                           oracle::posterior_variance(z, prior, 0.6)) < 1e-6);
    }
}

TEST_CASE("posterior nonzero probability") {
    const double w0 = 0.5 * npdf(0.0, 1.0) / (0.5 * npdf(0.0, 1.0) + 0.5 * npdf(0.0, 2.0));
    CHECK(posterior_nonzero_prob(0.0, PointNormal{0.5, 1.0}, 1.0) ==
          doctest::Approx(1.0 - w0).epsilon(1e-12));
    CHECK(posterior_nonzero_prob(3.0, PointNormal{0.0, 1.0}, 1.0) == 1.0);
    CHECK(posterior_nonzero_prob(10.0, PointNormal{0.5, 1.0}, 1.0) > 0.9999);
    CHECK_THROWS_AS(
        posterior_nonzero_prob(1.0, NormalMixture{Eigen::Vector2d(0.5, 0.5),
                                                  Eigen::Vector2d(1.0, 2.0)},
                               1.0),
        ConfigError);
}

TEST_CASE("inverse posterior mean") {
    CHECK(invert_posterior_mean(0.0, PointNormal{0.5, 1.0}, 1.0, 1e-12) == 0.0);
    CHECK(invert_posterior_mean(1.0, PointNormal{0.0, 1.0}, 1.0, 1e-10) ==
          doctest::Approx(2.0).epsilon(1e-9));
    for (const auto& [name, prior] : shipped_priors()) {
        CAPTURE(name);
        for (double s2 : {0.1, 1.0, 10.0})
            for (double th : {-20.0, -3.0, -0.5, -0.01, 0.01, 0.5, 3.0, 20.0}) {
                const double z = invert_posterior_mean(th, prior, s2, 1e-12);
                CHECK(std::abs(posterior_mean(z, prior, s2) - th) < 1e-10);
            }
    }
    CHECK_THROWS_AS(invert_posterior_mean(1.0, PointNormal{1.0, 1.0}, 1.0, 1e-10),
                    NumericError);
}

TEST_CASE("prior-coordinate gradient matches finite differences") {
    const double h = 1e-6;
    for (const auto& [name, prior] : shipped_priors()) {
        CAPTURE(name);
        const PriorCoding coding(prior);
        const Eigen::VectorXd u = coding.encode(prior);
        for (double s2 : {0.4, 1.3})
            for (double z : {-5.0, -0.7, 0.0, 1.1, 8.0}) {
                const Eigen::VectorXd g = marginal_loglik_dprior(z, prior, s2);
                REQUIRE(g.size() == coding.n_params());
                for (int k = 0; k < coding.n_params(); ++k) {
                    Eigen::VectorXd up = u, um = u;
                    up[k] += h;
                    um[k] -= h;
                    const double fd = (marginal_loglik(z, coding.decode(up), s2) -
                                       marginal_loglik(z, coding.decode(um), s2)) /
                                      (2 * h);
                    CHECK(std::abs(fd - g[k]) <= 1e-5 * std::max(1.0, std::abs(g[k])));
                }
            }
    }
    // identical components: softmax gradient vanishes by symmetry
    NormalMixture flat;
    flat.weights = Eigen::Vector3d::Constant(1.0 / 3.0);
    flat.variances = Eigen::Vector3d::Constant(2.0);
    const Eigen::VectorXd g = marginal_loglik_dprior(0.9, flat, 1.0);
    CHECK(g.lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("ash variance grid") {
    const Eigen::VectorXd grid = make_ash_grid(500, 20);
    REQUIRE(grid.size() == 21);
    CHECK(grid[0] == 0.0);
    CHECK(grid[1] == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(grid[20] == 500.0);
    const double ratio = grid[2] / grid[1];
    for (int k = 2; k < 20; ++k)
        CHECK(grid[k + 1] / grid[k] == doctest::Approx(ratio).epsilon(1e-10));

    const Eigen::VectorXd tiny = make_ash_grid(100, 2);
    REQUIRE(tiny.size() == 3);
    CHECK(tiny[0] == 0.0);
    CHECK(tiny[1] == doctest::Approx(0.01));
    CHECK(tiny[2] == 100.0);
}

TEST_CASE("quadrature equivalence across the shipped priors") {
    for (const auto& [name, prior] : shipped_priors()) {
        CAPTURE(name);
        for (double s2 : {0.01, 1.0, 100.0})
            for (double z : {-20.0, -10.0, 0.0, 1.5, 10.0, 20.0}) {
                CAPTURE(s2);
                CAPTURE(z);
                CHECK(std::abs(marginal_loglik(z, prior, s2) -
                               oracle::marginal_loglik(z, prior, s2)) < 1e-8);
            }
    }
}

TEST_CASE("shrinkage: monotone, sign-preserving, contracting") {
    for (const auto& [name, prior] : shipped_priors()) {
        CAPTURE(name);
        for (double s2 : {0.25, 1.0, 9.0}) {
            double prev = posterior_mean(-50.0, prior, s2);
            for (double z = -49.5; z <= 50.0; z += 0.5) {
                const double pm = posterior_mean(z, prior, s2);
                CHECK(pm > prev);
                if (z != 0.0) {
                    CHECK(pm * z >= 0.0);
                    CHECK(std::abs(pm) <= std::abs(z));
                }
                prev = pm;
            }
        }
    }
}

TEST_CASE("point-Laplace marginal is finite far into the tails") {
    for (double b : {0.1, 1.0, 10.0})
        for (double s2 : {0.01, 1.0, 100.0}) {
            const Prior pl = PointLaplace{0.3, b};
            for (double z = -500.0; z <= 500.0; z += 12.5) {
                CAPTURE(b);
                CAPTURE(s2);
                CAPTURE(z);
                CHECK(std::isfinite(marginal_loglik(z, pl, s2)));
                CHECK(std::isfinite(marginal_loglik_d1(z, pl, s2)));
            }
        }
}

TEST_CASE("prior validation") {
    CHECK_THROWS_AS(validate_prior(PointNormal{-0.1, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate_prior(PointNormal{0.5, 0.0}), ConfigError);
    CHECK_THROWS_AS(validate_prior(PointLaplace{0.5, -1.0}), ConfigError);
    NormalMixture bad;
    bad.weights = Eigen::Vector3d(0.5, 0.4, 0.2);  // sums to 1.1
    bad.variances = Eigen::Vector3d(0.0, 1.0, 2.0);
    CHECK_THROWS_AS(validate_prior(bad), ConfigError);
    bad.weights = Eigen::Vector3d(0.5, 0.3, 0.2);
    bad.variances = Eigen::Vector3d(0.0, 2.0, 1.0);  // not increasing
    CHECK_THROWS_AS(validate_prior(bad), ConfigError);
}
