#include "ebglm/objective.hpp"

#include <cmath>
#include <limits>

#include "ebglm/bnm.hpp"
#include "ebglm/errors.hpp"
#include "ebglm/penalty.hpp"
#include "ebglm/special.hpp"

namespace ebglm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEtaClamp = 700.0;  // exp() overflow guard for poisson

}  // namespace

Eigen::VectorXd compute_s2(const Dataset& data, const Family& family,
                           const Eigen::VectorXd& theta) {
    const int p = data.p();
    if (theta.size() != p) throw ConfigError("theta length does not match p");
    Eigen::VectorXd eta = data.X * theta;
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        w[i] = family.cumulant_d2(std::clamp(eta[i], -kEtaClamp, kEtaClamp));
    Eigen::VectorXd denom = data.X.cwiseProduct(data.X).transpose() * w;
    Eigen::VectorXd colsq = data.X.colwise().squaredNorm();
    Eigen::VectorXd s2(p);
    for (int j = 0; j < p; ++j) {
        if (colsq[j] <= 0.0)
            throw ConfigError("column " + std::to_string(j + 1) + " has zero norm");
        s2[j] = family.dispersion / std::max(denom[j], 1e-12 * colsq[j]);
    }
    return s2;
}

double negative_loglik(const Dataset& data, const Family& family,
                       const Eigen::VectorXd& theta) {
    const Eigen::VectorXd eta = data.X * theta;
    double acc = 0.0;
    switch (family.kind) {
        case FamilyKind::gaussian:
            acc = (0.5 * eta.array().square() - data.y.array() * eta.array()).sum() /
                  family.dispersion;
            break;
        case FamilyKind::bernoulli:
            for (Eigen::Index i = 0; i < eta.size(); ++i)
                acc += log1pexp(eta[i]) - data.y[i] * eta[i];
            break;
        case FamilyKind::poisson:
            for (Eigen::Index i = 0; i < eta.size(); ++i) {
                if (std::abs(eta[i]) > kEtaClamp) return kInf;
                acc += std::exp(eta[i]) - data.y[i] * eta[i];
            }
            break;
    }
    return std::isfinite(acc) ? acc : kInf;
}

Objective::Objective(const Dataset& data, const Family& family,
                     const Prior& prior_init, bool optimize_prior, double root_tol)
    : data_(&data),
      family_(family),
      coding_(prior_init),
      fixed_prior_(prior_init),
      optimize_prior_(optimize_prior),
      root_tol_(root_tol) {
    validate_prior(prior_init);
}

Eigen::VectorXd Objective::pack(const Eigen::VectorXd& theta, const Prior& prior) const {
    Eigen::VectorXd x(dim());
    x.head(n_theta()) = theta;
    if (optimize_prior_) x.tail(n_prior()) = coding_.encode(prior);
    return x;
}

Eigen::VectorXd Objective::theta_of(const Eigen::VectorXd& x) const {
    return x.head(n_theta());
}

Prior Objective::prior_of(const Eigen::VectorXd& x) const {
    if (!optimize_prior_) return fixed_prior_;
    return coding_.decode(x.tail(n_prior()));
}

double Objective::value(const Eigen::VectorXd& x, const Eigen::VectorXd& s2) const {
    const Eigen::VectorXd theta = theta_of(x);
    const Prior prior = prior_of(x);
    double h = negative_loglik(*data_, family_, theta);
    if (!std::isfinite(h)) return kInf;
    const int j0 = data_->has_intercept ? 1 : 0;
    try {
        for (int j = j0; j < n_theta(); ++j) {
            h += eval_penalty(theta[j], prior, s2[j], root_tol_).r;
            if (!std::isfinite(h)) return kInf;
        }
    } catch (const NumericError&) {
        return kInf;  // degenerate prior at a trial point; let line search back off
    }
    return h;
}

double Objective::value_live(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd theta = theta_of(x);
    if (!theta.allFinite()) return kInf;
    return value(x, compute_s2(*data_, family_, theta));
}

Eigen::VectorXd Objective::gradient(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& s2) const {
    const Eigen::VectorXd theta = theta_of(x);
    const Prior prior = prior_of(x);
    const Eigen::VectorXd eta = data_->X * theta;

    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        mu[i] = family_.cumulant_d1(std::clamp(eta[i], -kEtaClamp, kEtaClamp));

    Eigen::VectorXd grad(dim());
    grad.head(n_theta()) =
        data_->X.transpose() * (mu - data_->y) / family_.dispersion;
    if (optimize_prior_) grad.tail(n_prior()).setZero();

    const int j0 = data_->has_intercept ? 1 : 0;
    try {
        for (int j = j0; j < n_theta(); ++j) {
            const double z = invert_posterior_mean(theta[j], prior, s2[j], root_tol_);
            grad[j] += (z - theta[j]) / s2[j];
            if (optimize_prior_)
                grad.tail(n_prior()) -= marginal_loglik_dprior(z, prior, s2[j]);
        }
    } catch (const NumericError&) {
        grad.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    return grad;
}

}  // namespace ebglm
