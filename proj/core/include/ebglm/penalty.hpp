#pragma once

#include "ebglm/prior.hpp"

namespace ebglm {

// One evaluation of the posterior-mean penalty
//   r(theta) = -l_NM(z_g(theta); g, s2) + log N(z_g(theta); theta, s2),
// where z_g(theta) solves the inverse normal-means problem. The derivative
// at frozen s2 is (z - theta)/s2 exactly: the z-sensitivity terms cancel at
// the root (envelope identity), so no differentiation through the
// root-finder is needed.
struct PenaltyEval {
    double r = 0.0;
    double z = 0.0;
    double dr_dtheta = 0.0;
    double s2 = 0.0;
};

PenaltyEval eval_penalty(double theta, const Prior& prior, double s2,
                         double tol = 1e-10);

// Variational posterior q(b) = g(b) N(b; z, s2) / c(z) summarized by its
// pseudo-observation, mean (= theta by construction), variance and
// spike-exclusion probability.
struct PosteriorSummary {
    double z = 0.0;
    double s = 0.0;            // sqrt(s2)
    double mean = 0.0;
    double variance = 0.0;
    double nonzero_prob = 1.0;
};

PosteriorSummary reconstruct_posterior(double theta, const Prior& prior, double s2,
                                       double tol = 1e-10);

}  // namespace ebglm
