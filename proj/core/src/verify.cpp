#include "ebglm/verify.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

#include "ebglm/bnm.hpp"
#include "ebglm/errors.hpp"
#include "ebglm/objective.hpp"
#include "ebglm/oracle.hpp"
#include "ebglm/penalty.hpp"
#include "ebglm/simulate.hpp"

namespace ebglm {

namespace {

struct Reporter {
    std::ostream& out;
    bool all_ok = true;

    void check(const std::string& name, bool ok, double worst, const char* what) {
        all_ok &= ok;
        out << (ok ? "PASS " : "FAIL ") << name << " (max " << what << " " << worst
            << ")\n";
    }
};

std::vector<std::pair<std::string, Prior>> verify_priors() {
    return {{"point-normal", PointNormal{0.5, 2.0}},
            {"point-laplace", PointLaplace{0.3, 1.0}},
            {"ash", make_uniform_ash(500, 20)}};
}

void suite_bnm(Reporter& rep) {
    const std::vector<double> s2s{0.01, 1.0, 100.0};
    for (const auto& [name, prior] : verify_priors()) {
        double worst = 0.0;
        for (double s2 : s2s)
            for (int i = 0; i <= 40; ++i) {
                const double z = -20.0 + i * 1.0;
                worst = std::max(worst, std::abs(marginal_loglik(z, prior, s2) -
                                                 oracle::marginal_loglik(z, prior, s2)));
            }
        rep.check("bnm/quadrature-equivalence/" + name, worst < 1e-8, worst, "|err|");
    }
    for (const auto& [name, prior] : verify_priors()) {
        double worst = 0.0;
        for (double s2 : {0.1, 1.0, 10.0})
            for (double th : {-20.0, -3.0, -0.5, -0.01, 0.01, 0.5, 3.0, 20.0}) {
                const double z = invert_posterior_mean(th, prior, s2, 1e-12);
                worst = std::max(worst, std::abs(posterior_mean(z, prior, s2) - th));
            }
        rep.check("bnm/inverse-roundtrip/" + name, worst < 1e-10, worst, "|err|");
    }
    for (const auto& [name, prior] : verify_priors()) {
        bool monotone = true;
        double worst = 0.0;
        for (double s2 : {0.1, 1.0, 10.0}) {
            double prev = posterior_mean(-50.0, prior, s2);
            for (int i = 1; i <= 400; ++i) {
                const double z = -50.0 + i * 0.25;
                const double cur = posterior_mean(z, prior, s2);
                if (!(cur > prev)) monotone = false;
                worst = std::max(worst, prev - cur);
                prev = cur;
            }
        }
        rep.check("bnm/shrinkage-monotone/" + name, monotone, worst, "backstep");
    }
    {
        bool finite = true;
        for (double b : {0.1, 1.0, 10.0})
            for (double s2 : {0.01, 1.0, 100.0})
                for (int i = 0; i <= 100; ++i) {
                    const double z = -500.0 + i * 10.0;
                    const Prior pl = PointLaplace{0.3, b};
                    if (!std::isfinite(marginal_loglik(z, pl, s2)) ||
                        !std::isfinite(marginal_loglik_d1(z, pl, s2)))
                        finite = false;
                }
        rep.check("bnm/point-laplace-stability", finite, 0.0, "violations");
    }
}

void suite_penalty(Reporter& rep) {
    {
        double worst = 0.0;
        for (double sigma2 : {0.1, 0.5, 1.0, 5.0, 10.0})
            for (double s2 : {0.1, 0.5, 1.0, 5.0, 10.0})
                for (double th : {-20.0, -10.0, -5.0, -1.0, 0.0, 1.0, 5.0, 10.0, 20.0}) {
                    const Prior g = PointNormal{0.0, sigma2};
                    const double r = eval_penalty(th, g, s2, 1e-12).r;
                    const double want = th * th / (2.0 * sigma2) +
                                        0.5 * std::log((sigma2 + s2) / s2);
                    worst = std::max(worst, std::abs(r - want));
                }
        rep.check("penalty/pure-normal-closed-form", worst < 1e-8, worst, "|err|");
    }
    for (const auto& [name, prior] : verify_priors()) {
        double worst = 0.0;
        for (double th : {0.25, 0.7, 1.5, 4.0})
            worst = std::max(worst, std::abs(eval_penalty(th, prior, 0.7).r -
                                             eval_penalty(-th, prior, 0.7).r));
        rep.check("penalty/symmetry/" + name, worst < 1e-9, worst, "|r(t)-r(-t)|");
    }
    for (const auto& [name, prior] : verify_priors()) {
        double worst = 0.0;
        const double h = 1e-6;
        for (double s2 : {0.25, 1.0, 4.0})
            for (double th : {-3.0, -0.8, 0.3, 1.7}) {
                const PenaltyEval e = eval_penalty(th, prior, s2, 1e-12);
                const double fd = (eval_penalty(th + h, prior, s2, 1e-12).r -
                                   eval_penalty(th - h, prior, s2, 1e-12).r) /
                                  (2.0 * h);
                const double rel = std::abs(fd - e.dr_dtheta) /
                                   std::max(1.0, std::abs(e.dr_dtheta));
                worst = std::max(worst, rel);
            }
        rep.check("penalty/envelope-derivative/" + name, worst < 1e-4, worst, "rel err");
    }
}

void suite_gradient(Reporter& rep) {
    const std::vector<std::pair<std::string, Family>> families{
        {"gaussian", Family::gaussian(1.5)},
        {"logistic", Family::bernoulli()},
        {"poisson", Family::poisson()}};
    for (const auto& [fname, family] : families) {
        for (const auto& [pname, prior] : verify_priors()) {
            SimConfig sim;
            sim.n = 50;
            sim.p = 10;
            sim.s = 3;
            sim.family = family;
            sim.n_test = 0;
            sim.seed = 20240915;
            const SimData data = simulate(sim);
            const Dataset train = data.train_dataset();

            Objective obj(train, family, prior, /*optimize_prior=*/true, 1e-12);
            Eigen::VectorXd theta = Eigen::VectorXd::Zero(train.p());
            for (int j = 0; j < train.p(); ++j)
                theta[j] = 0.3 * std::sin(1.0 + 2.0 * j);
            Eigen::VectorXd x = obj.pack(theta, prior);
            const Eigen::VectorXd s2 = compute_s2(train, family, theta);
            const Eigen::VectorXd g = obj.gradient(x, s2);

            double worst = 0.0;
            const double h = 1e-6;
            for (int k = 0; k < obj.dim(); ++k) {
                Eigen::VectorXd xp = x, xm = x;
                xp[k] += h;
                xm[k] -= h;
                const double fd = (obj.value(xp, s2) - obj.value(xm, s2)) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - g[k]) /
                                            std::max(1.0, std::abs(g[k])));
            }
            rep.check("gradient/fd/" + fname + "/" + pname, worst < 1e-5, worst,
                      "rel err");
        }
    }
}

}  // namespace

bool run_verify_suite(const std::string& suite, std::ostream& out) {
    Reporter rep{out};
    if (suite == "bnm" || suite == "all") suite_bnm(rep);
    if (suite == "penalty" || suite == "all") suite_penalty(rep);
    if (suite == "gradient" || suite == "all") suite_gradient(rep);
    if (suite != "bnm" && suite != "penalty" && suite != "gradient" && suite != "all")
        throw ConfigError("unknown verify suite '" + suite +
                          "' (expected bnm, penalty, gradient, or all)");
    return rep.all_ok;
}

}  // namespace ebglm
