#pragma once

#include <Eigen/Core>

#include "ebglm/dataset.hpp"
#include "ebglm/family.hpp"
#include "ebglm/prior.hpp"

namespace ebglm {

// Per-coefficient normal-means variances
//   s2_j = a(phi) / sum_i b''(x_i' theta) x_ij^2,
// with the denominator floored at 1e-12 * sum_i x_ij^2 to guard against
// b'' underflowing at extreme linear predictors. The intercept entry is
// computed like any other but never used by the penalty.
Eigen::VectorXd compute_s2(const Dataset& data, const Family& family,
                           const Eigen::VectorXd& theta);

// The penalized objective
//   h(theta, g) = -sum_i l(x_i' theta) + sum_{j not intercept} r_j(theta_j, g)
// over the concatenated coordinates x = (theta, u) where u are the
// unconstrained prior coordinates (empty when the prior is held fixed).
//
// Objective and gradient are evaluated at a frozen s2 vector supplied by
// the caller; value_live() recomputes s2 from theta first. Overflow in any
// term yields +inf (value) so a line search can reject the trial point
// instead of trapping.
//
// The gradient freezes s2: d r_j / d theta_j = (z_j - theta_j)/s2_j by the
// envelope identity, and the prior block is -sum_j dl_NM(z_j)/du. The
// theta-dependence of s2 itself is handled by the solver's outer refresh
// loop, not by the gradient.
class Objective {
public:
    Objective(const Dataset& data, const Family& family, const Prior& prior_init,
              bool optimize_prior, double root_tol = 1e-10);

    int n_theta() const { return static_cast<int>(data_->p()); }
    int n_prior() const { return optimize_prior_ ? coding_.n_params() : 0; }
    int dim() const { return n_theta() + n_prior(); }

    Eigen::VectorXd pack(const Eigen::VectorXd& theta, const Prior& prior) const;
    Eigen::VectorXd theta_of(const Eigen::VectorXd& x) const;
    Prior prior_of(const Eigen::VectorXd& x) const;

    double value(const Eigen::VectorXd& x, const Eigen::VectorXd& s2_frozen) const;
    double value_live(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& s2_frozen) const;

    const Dataset& data() const { return *data_; }
    const Family& family() const { return family_; }
    double root_tol() const { return root_tol_; }

private:
    const Dataset* data_;
    Family family_;
    PriorCoding coding_;
    Prior fixed_prior_;
    bool optimize_prior_;
    double root_tol_;
};

// Negative sum of log-likelihood terms, -sum_i l(x_i' theta); +inf when a
// poisson linear predictor exceeds +-700.
double negative_loglik(const Dataset& data, const Family& family,
                       const Eigen::VectorXd& theta);

}  // namespace ebglm
