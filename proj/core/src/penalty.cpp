#include "ebglm/penalty.hpp"

#include <cmath>

#include "ebglm/bnm.hpp"
#include "ebglm/special.hpp"

namespace ebglm {

PenaltyEval eval_penalty(double theta, const Prior& prior, double s2, double tol) {
    PenaltyEval out;
    out.s2 = s2;
    out.z = invert_posterior_mean(theta, prior, s2, tol);
    out.r = -marginal_loglik(out.z, prior, s2) + log_normal_pdf(out.z, theta, s2);
    out.dr_dtheta = (out.z - theta) / s2;
    return out;
}

PosteriorSummary reconstruct_posterior(double theta, const Prior& prior, double s2,
                                       double tol) {
    PosteriorSummary out;
    out.z = invert_posterior_mean(theta, prior, s2, tol);
    out.s = std::sqrt(s2);
    out.mean = theta;
    out.variance = posterior_variance(out.z, prior, s2);
    out.nonzero_prob = posterior_nonzero_prob(out.z, prior, s2);
    return out;
}

}  // namespace ebglm
