#include "ebglm/solver.hpp"

#include <cmath>
#include <ostream>

#include "ebglm/bnm.hpp"
#include "ebglm/errors.hpp"
#include "ebglm/objective.hpp"

namespace ebglm {

namespace {

void map_back_from_standardization(FitResult& res) {
    if (!res.standardization) {
        res.theta = res.theta_fit;
        return;
    }
    const auto& st = *res.standardization;
    const int p = static_cast<int>(res.theta_fit.size());
    res.theta = res.theta_fit;
    const int j0 = res.has_intercept ? 1 : 0;
    double shift = 0.0;
    for (int j = j0; j < p; ++j) {
        res.theta[j] = res.theta_fit[j] / st.scale[j];
        shift += res.theta_fit[j] * st.center[j] / st.scale[j];
    }
    if (res.has_intercept) res.theta[0] = res.theta_fit[0] - shift;
}

}  // namespace

FitResult fit(const Dataset& data, const Family& family, const Prior& prior_init,
              const SolverConfig& config, const FitOptions& options) {
    config.validate();
    validate_dataset(data);
    validate_prior(prior_init);
    for (Eigen::Index i = 0; i < data.y.size(); ++i) family.check_support(data.y[i]);

    const int p = data.p();
    Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(p);
    if (options.init_theta) {
        if (options.init_theta->size() != p)
            throw ConfigError("--init-theta length does not match the number of columns");
        theta0 = *options.init_theta;
    }

    Objective obj(data, family, prior_init, options.optimize_prior, config.root_tol);
    Eigen::VectorXd x = obj.pack(theta0, prior_init);

    FitResult res;
    res.family = family;
    res.has_intercept = data.has_intercept;
    res.standardization = data.standardization;
    res.names = data.names;
    res.seed = config.seed;

    double f_live = obj.value_live(x);
    if (!std::isfinite(f_live))
        throw NumericError("objective is not finite at the initial point");
    res.objective_trace.push_back(f_live);

    for (int outer = 1; outer <= config.outer_max_iter; ++outer) {
        const Eigen::VectorXd s2 = compute_s2(data, family, obj.theta_of(x));
        const LbfgsResult inner = lbfgs_minimize(
            [&](const Eigen::VectorXd& v) { return obj.value(v, s2); },
            [&](const Eigen::VectorXd& v) { return obj.gradient(v, s2); }, x, config);
        res.report.inner_iters += inner.iterations;
        res.report.outer_iters = outer;
        if (inner.stalled) res.report.stalled = true;

        const double f_new = obj.value_live(inner.x);
        if (!(f_new <= f_live)) {
            // refreshing s2 would raise the live objective: keep the
            // previous point and stop here
            res.report.stop_reason = "s2 refresh could not decrease the objective";
            res.report.converged = true;
            break;
        }
        const double drop = f_live - f_new;
        x = inner.x;
        f_live = f_new;
        res.objective_trace.push_back(f_live);
        if (options.progress)
            (*options.progress) << "outer " << outer << ": h = " << f_live
                                << " (inner iters " << inner.iterations << ")\n";
        if (drop <= config.obj_rel_tol * std::max(1.0, std::abs(f_new))) {
            res.report.converged = true;
            res.report.stop_reason = "objective change below tolerance";
            break;
        }
        if (outer == config.outer_max_iter)
            res.report.stop_reason = "outer iteration limit reached";
    }

    res.theta_fit = obj.theta_of(x);
    res.prior_hat = obj.prior_of(x);
    res.elbo = -f_live;
    res.s2 = compute_s2(data, family, res.theta_fit);
    res.summaries.resize(p);
    const int j0 = data.has_intercept ? 1 : 0;
    for (int j = 0; j < p; ++j) {
        if (j < j0) {
            // flat-prior coordinate: q is N(theta, s2) itself
            res.summaries[j] = PosteriorSummary{res.theta_fit[j], std::sqrt(res.s2[j]),
                                                res.theta_fit[j], res.s2[j], 1.0};
        } else {
            res.summaries[j] = reconstruct_posterior(res.theta_fit[j], res.prior_hat,
                                                     res.s2[j], config.root_tol);
        }
    }
    map_back_from_standardization(res);
    return res;
}

Eigen::VectorXd predict(const FitResult& fit, const Eigen::MatrixXd& Xnew,
                        PredictKind kind) {
    const int p = static_cast<int>(fit.theta.size());
    const int expected = p - (fit.has_intercept ? 1 : 0);
    if (Xnew.cols() != expected)
        throw ConfigError("prediction data has " + std::to_string(Xnew.cols()) +
                          " feature columns, model expects " + std::to_string(expected));
    Eigen::VectorXd eta;
    if (fit.has_intercept)
        eta = (Xnew * fit.theta.tail(p - 1)).array() + fit.theta[0];
    else
        eta = Xnew * fit.theta;
    if (kind == PredictKind::link) return eta;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        eta[i] = fit.family.cumulant_d1(eta[i]);
    return eta;
}

PredictKind predict_kind_from_name(const std::string& name) {
    if (name == "link") return PredictKind::link;
    if (name == "response") return PredictKind::response;
    throw ConfigError("unknown prediction type '" + name +
                      "' (expected link or response)");
}

}  // namespace ebglm
