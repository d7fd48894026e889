#pragma once

#include <Eigen/Core>

#include "ebglm/prior.hpp"

namespace ebglm {

// Bayesian normal-means machinery for the model
//   z | b ~ N(b, s2),   b ~ g,
// where g is one of the Prior variants. Everything is evaluated in log
// space (log-sum-exp over mixture components; scaled erfc for the Laplace
// slab) so that spike/slab density ratios spanning hundreds of orders of
// magnitude stay representable.

// log m(z) = log \int N(z; b, s2) g(b) db
double marginal_loglik(double z, const Prior& prior, double s2);

// d/dz log m(z)
double marginal_loglik_d1(double z, const Prior& prior, double s2);

// Tweedie's formula: E[b | z] = z + s2 * d/dz log m(z).
// Same sign as z and |result| <= |z| for the shipped symmetric priors.
double posterior_mean(double z, const Prior& prior, double s2);

// Var[b | z]. Analytic for the normal-mixture variants; for point-Laplace
// computed as s2 * (1 + s2 * l'') with l'' by central differences of
// marginal_loglik_d1 (step 1e-5). Clamped at 0.
double posterior_variance(double z, const Prior& prior, double s2);

// 1 - posterior weight of the spike component.
double posterior_nonzero_prob(double z, const Prior& prior, double s2);

// Solves theta = z + s2 * l'(z) for z (the pseudo-observation z_g(theta)).
// Bisection on a bracket grown by doubling away from theta; relies on the
// posterior mean being increasing in z with |E[b|z]| <= |z|. Stops when the
// bracket width is <= tol. Throws NumericError if 200 doublings cannot
// bracket the root (degenerate prior).
double invert_posterior_mean(double theta, const Prior& prior, double s2,
                             double tol = 1e-10);

// Gradient of log m(z) at fixed z with respect to the unconstrained prior
// coordinates of PriorCoding evaluated at `prior`:
//   point-normal / point-laplace: (d/d logit pi0, d/d log sigma2-or-scale)
//   normal-mixture: d/d logits[0..K-1] with the last logit pinned to 0.
Eigen::VectorXd marginal_loglik_dprior(double z, const Prior& prior, double s2);

}  // namespace ebglm
