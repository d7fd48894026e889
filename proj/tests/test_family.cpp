#include <doctest.h>

#include <cmath>

#include "ebglm/errors.hpp"
#include "ebglm/family.hpp"

using namespace ebglm;

TEST_CASE("cumulant values") {
    CHECK(Family::bernoulli().cumulant(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(Family::gaussian(1.0).cumulant(3.0) == doctest::Approx(4.5).epsilon(1e-14));
    // asymptote log(1+e^eta) -> eta
    CHECK(std::abs(Family::bernoulli().cumulant(40.0) - 40.0) < 1e-12);
    CHECK(Family::poisson().cumulant(1.0) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("mean function values") {
    CHECK(Family::bernoulli().cumulant_d1(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(Family::poisson().cumulant_d1(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    // stable sigmoid deep in the tail: sigmoid(-40) ~ e^-40 to first order
    const double tail = Family::bernoulli().cumulant_d1(-40.0);
    CHECK(std::abs(tail - std::exp(-40.0)) / std::exp(-40.0) < 0.1);
    CHECK(tail > 0.0);
}

TEST_CASE("variance function values") {
    CHECK(Family::bernoulli().cumulant_d2(0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(Family::gaussian(3.0).cumulant_d2(7.0) == 1.0);
    const double p = sigmoid(3.0);
    CHECK(Family::bernoulli().cumulant_d2(3.0) == doctest::Approx(p * (1 - p)).epsilon(1e-10));
    CHECK(Family::bernoulli().cumulant_d2(3.0) == doctest::Approx(0.04518).epsilon(1e-3));
}

TEST_CASE("log-likelihood terms and support") {
    CHECK(Family::bernoulli().log_lik_term(1.0, 0.0) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    CHECK(Family::gaussian(2.0).log_lik_term(1.0, 1.0) == doctest::Approx(0.25));
    CHECK(Family::poisson().log_lik_term(2.0, 0.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(Family::bernoulli().log_lik_term(2.0, 0.0), ConfigError);
    CHECK_THROWS_AS(Family::poisson().log_lik_term(-1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(Family::poisson().log_lik_term(1.5, 0.0), ConfigError);
}

TEST_CASE("cumulant derivatives match finite differences") {
    const double h = 1e-5;
    for (const Family& f :
         {Family::gaussian(1.0), Family::bernoulli(), Family::poisson()}) {
        for (double eta = -10.0; eta <= 10.0; eta += 0.5) {
            const double fd1 = (f.cumulant(eta + h) - f.cumulant(eta - h)) / (2 * h);
            CHECK(std::abs(fd1 - f.cumulant_d1(eta)) <=
                  1e-6 * std::max(1.0, std::abs(f.cumulant_d1(eta))));
            const double fd2 =
                (f.cumulant_d1(eta + h) - f.cumulant_d1(eta - h)) / (2 * h);
            CHECK(std::abs(fd2 - f.cumulant_d2(eta)) <=
                  1e-6 * std::max(1.0, std::abs(f.cumulant_d2(eta))));
        }
    }
}

TEST_CASE("convexity and bernoulli tail stability") {
    for (const Family& f :
         {Family::gaussian(1.0), Family::bernoulli(), Family::poisson()}) {
        for (double eta = -30.0; eta <= 30.0; eta += 1.0)
            CHECK(f.cumulant_d2(eta) >= 0.0);
    }
    const Family b = Family::bernoulli();
    double prev_c = b.cumulant(-700.0), prev_m = b.cumulant_d1(-700.0);
    for (double eta = -690.0; eta <= 700.0; eta += 10.0) {
        const double c = b.cumulant(eta), m = b.cumulant_d1(eta);
        CHECK(std::isfinite(c));
        CHECK(std::isfinite(m));
        CHECK(c >= prev_c);
        CHECK(m >= prev_m);
        prev_c = c;
        prev_m = m;
    }
}
