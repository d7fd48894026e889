#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>

namespace ebglm {

// Spike weight cap: a pure spike makes the posterior-mean map degenerate,
// so estimated priors are kept at pi0 <= 1 - kSpikeEps.
inline constexpr double kSpikeEps = 1e-8;

// pi0 * delta_0 + (1 - pi0) * N(0, sigma2)
struct PointNormal {
    double pi0 = 0.5;
    double sigma2 = 1.0;
};

// pi0 * delta_0 + (1 - pi0) * Laplace(0, scale); variance of the slab is
// 2 * scale^2.
struct PointLaplace {
    double pi0 = 0.5;
    double scale = 1.0;
};

// sum_k weights[k] * N(0, variances[k]) on a fixed variance grid with
// variances[0] == 0 (the spike) and the rest strictly increasing.
struct NormalMixture {
    Eigen::VectorXd weights;
    Eigen::VectorXd variances;
};

using Prior = std::variant<PointNormal, PointLaplace, NormalMixture>;

// Throws ConfigError if the invariants do not hold (weights on the simplex,
// positive scales, grid shape).
void validate_prior(const Prior& prior);

bool prior_is_pure_spike(const Prior& prior);
std::string prior_name(const Prior& prior);

// Geometric variance grid 0, 0.01, ..., n with K+1 entries; ratios between
// consecutive nonzero entries are constant and the endpoint is exactly n.
Eigen::VectorXd make_ash_grid(int n, int K = 20);

NormalMixture make_uniform_ash(int n, int K = 20);

// Maps a prior variant to and from unconstrained optimization coordinates:
//   point-normal   (logit pi0, log sigma2)
//   point-laplace  (logit pi0, log scale)
//   normal-mixture softmax logits of length K+1 with the last pinned to 0
//                  (K free coordinates); the variance grid stays fixed.
// decode() always yields a valid Prior: pi0 (or the spike weight) is capped
// at 1 - kSpikeEps and log-scale coordinates are clamped to +-27.6 so that
// sigma2, scale stay within [1e-12, 1e12].
class PriorCoding {
public:
    // `example` fixes the variant and, for mixtures, the variance grid.
    explicit PriorCoding(const Prior& example);

    int n_params() const { return n_params_; }
    Eigen::VectorXd encode(const Prior& prior) const;
    Prior decode(const Eigen::VectorXd& u) const;

private:
    Prior shape_;
    int n_params_ = 0;
};

}  // namespace ebglm
