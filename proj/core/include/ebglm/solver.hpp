#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ebglm/dataset.hpp"
#include "ebglm/family.hpp"
#include "ebglm/lbfgs.hpp"
#include "ebglm/penalty.hpp"
#include "ebglm/prior.hpp"

namespace ebglm {

struct FitOptions {
    bool optimize_prior = true;  // hold the prior fixed at prior_init when false
    std::optional<Eigen::VectorXd> init_theta;  // fit-space warm start; default 0
    std::ostream* progress = nullptr;           // per-outer-iteration log sink
};

struct ConvergenceReport {
    bool converged = false;
    bool stalled = false;
    int outer_iters = 0;
    int inner_iters = 0;
    std::string stop_reason;
};

struct FitResult {
    Eigen::VectorXd theta;      // original-scale coefficients
    Eigen::VectorXd theta_fit;  // fit-space coefficients (equal unless standardized)
    Prior prior_hat;
    std::vector<double> objective_trace;  // live h at the start and after each
                                          // accepted outer iteration; nonincreasing
    double elbo = 0.0;                    // -(final live h)
    ConvergenceReport report;
    std::vector<PosteriorSummary> summaries;  // fit-space, one per coefficient
    Eigen::VectorXd s2;                       // final fit-space variances

    Family family;
    bool has_intercept = true;
    std::optional<Standardization> standardization;
    std::vector<std::string> names;
    std::string response_name = "y";
    std::uint64_t seed = 0;
};

// Minimizes h(theta, g) by L-BFGS over (theta, unconstrained prior
// coordinates) at frozen s2, refreshing s2(theta) in an outer loop.
// An outer step is kept only if the live objective (s2 recomputed) does
// not increase, so objective_trace is nonincreasing by construction.
// Initialization: theta = 0 unless given; the prior starts at prior_init.
FitResult fit(const Dataset& data, const Family& family, const Prior& prior_init,
              const SolverConfig& config, const FitOptions& options = {});

enum class PredictKind { link, response };

// Xnew holds raw feature columns (without the intercept column, which is
// appended automatically when the model has one).
Eigen::VectorXd predict(const FitResult& fit, const Eigen::MatrixXd& Xnew,
                        PredictKind kind);

PredictKind predict_kind_from_name(const std::string& name);

}  // namespace ebglm
