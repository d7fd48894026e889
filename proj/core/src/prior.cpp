#include "ebglm/prior.hpp"

#include <cmath>

#include "ebglm/errors.hpp"
#include "ebglm/special.hpp"

namespace ebglm {

namespace {

constexpr double kLogScaleClamp = 27.6;  // exp(+-27.6) ~ 1e+-12

double clamped_exp(double u) {
    return std::exp(std::clamp(u, -kLogScaleClamp, kLogScaleClamp));
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

}  // namespace

void validate_prior(const Prior& prior) {
    std::visit(
        [](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, PointNormal>) {
                if (!(g.pi0 >= 0.0 && g.pi0 <= 1.0))
                    throw ConfigError("point-normal pi0 must be in [0, 1]");
                if (!(g.sigma2 > 0.0))
                    throw ConfigError("point-normal sigma2 must be > 0");
            } else if constexpr (std::is_same_v<T, PointLaplace>) {
                if (!(g.pi0 >= 0.0 && g.pi0 <= 1.0))
                    throw ConfigError("point-laplace pi0 must be in [0, 1]");
                if (!(g.scale > 0.0))
                    throw ConfigError("point-laplace scale must be > 0");
            } else {
                if (g.weights.size() != g.variances.size() || g.weights.size() < 2)
                    throw ConfigError("normal-mixture needs matching weights/variances, length >= 2");
                if (g.variances[0] != 0.0)
                    throw ConfigError("normal-mixture variances[0] must be 0 (the spike)");
                double sum = 0.0;
                for (int k = 0; k < g.weights.size(); ++k) {
                    if (!(g.weights[k] >= 0.0))
                        throw ConfigError("normal-mixture weights must be >= 0");
                    sum += g.weights[k];
                }
                if (std::abs(sum - 1.0) > 1e-12)
                    throw ConfigError("normal-mixture weights must sum to 1");
                for (int k = 2; k < g.variances.size(); ++k)
                    if (!(g.variances[k] > g.variances[k - 1]))
                        throw ConfigError("normal-mixture variances must be strictly increasing");
                if (!(g.variances[1] > 0.0))
                    throw ConfigError("normal-mixture variances[1] must be > 0");
            }
        },
        prior);
}

bool prior_is_pure_spike(const Prior& prior) {
    return std::visit(
        [](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, NormalMixture>) {
                return g.weights[0] > 1.0 - kSpikeEps;
            } else {
                return g.pi0 > 1.0 - kSpikeEps;
            }
        },
        prior);
}

std::string prior_name(const Prior& prior) {
    if (std::holds_alternative<PointNormal>(prior)) return "point-normal";
    if (std::holds_alternative<PointLaplace>(prior)) return "point-laplace";
    return "normal-mixture";
}

Eigen::VectorXd make_ash_grid(int n, int K) {
    if (n < 2) throw ConfigError("ash grid needs sample count n >= 2");
    if (K < 2) throw ConfigError("ash grid needs K >= 2");
    Eigen::VectorXd grid(K + 1);
    grid[0] = 0.0;
    const double lo = 0.01;
    const double a = std::pow(static_cast<double>(n) / lo, 1.0 / (K - 1));
    for (int k = 1; k <= K; ++k) grid[k] = lo * std::pow(a, k - 1);
    grid[K] = static_cast<double>(n);  // endpoint exact
    return grid;
}

NormalMixture make_uniform_ash(int n, int K) {
    NormalMixture g;
    g.variances = make_ash_grid(n, K);
    g.weights = Eigen::VectorXd::Constant(K + 1, 1.0 / (K + 1));
    return g;
}

PriorCoding::PriorCoding(const Prior& example) : shape_(example) {
    validate_prior(example);
    if (std::holds_alternative<NormalMixture>(example))
        n_params_ = static_cast<int>(std::get<NormalMixture>(example).weights.size()) - 1;
    else
        n_params_ = 2;
}

Eigen::VectorXd PriorCoding::encode(const Prior& prior) const {
    Eigen::VectorXd u(n_params_);
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, PointNormal>) {
                u[0] = logit(std::clamp(g.pi0, 1e-14, 1.0 - 1e-14));
                u[1] = std::log(g.sigma2);
            } else if constexpr (std::is_same_v<T, PointLaplace>) {
                u[0] = logit(std::clamp(g.pi0, 1e-14, 1.0 - 1e-14));
                u[1] = std::log(g.scale);
            } else {
                // logits relative to the pinned last component
                const double ref = std::log(std::max(g.weights[g.weights.size() - 1], 1e-300));
                for (int k = 0; k < n_params_; ++k)
                    u[k] = std::log(std::max(g.weights[k], 1e-300)) - ref;
            }
        },
        prior);
    return u;
}

Prior PriorCoding::decode(const Eigen::VectorXd& u) const {
    if (u.size() != n_params_)
        throw ConfigError("prior coordinate vector has wrong length");
    Prior out = shape_;
    std::visit(
        [&](auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, PointNormal>) {
                g.pi0 = std::min(sigmoid(u[0]), 1.0 - kSpikeEps);
                g.sigma2 = clamped_exp(u[1]);
            } else if constexpr (std::is_same_v<T, PointLaplace>) {
                g.pi0 = std::min(sigmoid(u[0]), 1.0 - kSpikeEps);
                g.scale = clamped_exp(u[1]);
            } else {
                const int K1 = static_cast<int>(g.weights.size());
                Eigen::VectorXd logits(K1);
                logits.head(n_params_) = u;
                logits[K1 - 1] = 0.0;
                const double m = logits.maxCoeff();
                Eigen::VectorXd w = (logits.array() - m).exp();
                w /= w.sum();
                if (w[0] > 1.0 - kSpikeEps) {
                    const double rest = 1.0 - w[0];
                    const double target_rest = kSpikeEps;
                    w[0] = 1.0 - kSpikeEps;
                    if (rest > 0.0)
                        w.tail(K1 - 1) *= target_rest / rest;
                    else
                        w.tail(K1 - 1).setConstant(target_rest / (K1 - 1));
                }
                g.weights = w;
            }
        },
        out);
    return out;
}

}  // namespace ebglm
