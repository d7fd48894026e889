#pragma once

#include "ebglm/prior.hpp"

namespace ebglm::oracle {

// Brute-force normal-means quantities by adaptive quadrature over the slab
// density, with the spike handled as an exact point-mass term. These share
// no code path with the closed forms in bnm.cpp beyond elementary
// functions, so they serve as an independent check of those formulas.

// log \int N(z; mu, s2) g(mu) dmu
double marginal_loglik(double z, const Prior& prior, double s2);

// E[b | z] and Var[b | z] under the exact BNM posterior.
double posterior_mean(double z, const Prior& prior, double s2);
double posterior_variance(double z, const Prior& prior, double s2);

// E_q[ log N(z; b, s2) ] under the exact BNM posterior; the posterior is
// q(b) = g(b) N(z; b, s2) / m(z), so KL(q || g) = this - log m(z).
double posterior_expected_log_kernel(double z, const Prior& prior, double s2);
double kl_to_prior(double z, const Prior& prior, double s2);

}  // namespace ebglm::oracle
