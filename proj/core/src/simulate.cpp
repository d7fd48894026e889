#include "ebglm/simulate.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "ebglm/errors.hpp"
#include "ebglm/rng.hpp"
#include "ebglm/special.hpp"

namespace ebglm {

BetaDist beta_dist_from_name(const std::string& name) {
    if (name == "normal") return BetaDist::normal;
    if (name == "laplace") return BetaDist::laplace;
    if (name == "constant1") return BetaDist::constant1;
    if (name == "uniform") return BetaDist::uniform;
    throw ConfigError("unknown coefficient distribution '" + name +
                      "' (expected normal, laplace, constant1, or uniform)");
}

CorrModel corr_model_from_name(const std::string& name) {
    if (name == "equicorrelated") return CorrModel::equicorrelated;
    if (name == "ar1") return CorrModel::ar1;
    throw ConfigError("unknown correlation model '" + name +
                      "' (expected equicorrelated or ar1)");
}

std::string to_string(BetaDist d) {
    switch (d) {
        case BetaDist::normal: return "normal";
        case BetaDist::laplace: return "laplace";
        case BetaDist::constant1: return "constant1";
        case BetaDist::uniform: return "uniform";
    }
    return "?";
}

void SimConfig::validate() const {
    if (n < 1 || n_test < 0) throw ConfigError("simulate: n must be >= 1, n_test >= 0");
    if (p < 1) throw ConfigError("simulate: p must be >= 1");
    if (s < 0 || s > p) throw ConfigError("simulate: need 0 <= s <= p");
    if (!(rho >= 0.0 && rho <= 0.99))
        throw ConfigError("simulate: rho must be in [0, 0.99]");
}

namespace {

void draw_design(Eigen::MatrixXd& X, int n, int p, double rho, CorrModel model,
                 Rng& rng) {
    X.resize(n, p);
    if (model == CorrModel::equicorrelated) {
        const double a = std::sqrt(rho), b = std::sqrt(1.0 - rho);
        for (int i = 0; i < n; ++i) {
            const double common = rng.normal();
            for (int j = 0; j < p; ++j) X(i, j) = a * common + b * rng.normal();
        }
    } else {
        const double b = std::sqrt(1.0 - rho * rho);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = rng.normal();
            for (int j = 1; j < p; ++j) X(i, j) = rho * X(i, j - 1) + b * rng.normal();
        }
    }
}

void draw_response(Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& beta, const Family& family, Rng& rng) {
    const Eigen::VectorXd eta = X * beta;
    y.resize(eta.size());
    switch (family.kind) {
        case FamilyKind::gaussian: {
            const double sd = std::sqrt(family.dispersion);
            for (Eigen::Index i = 0; i < eta.size(); ++i)
                y[i] = eta[i] + sd * rng.normal();
            break;
        }
        case FamilyKind::bernoulli:
            for (Eigen::Index i = 0; i < eta.size(); ++i)
                y[i] = rng.bernoulli(sigmoid(eta[i])) ? 1.0 : 0.0;
            break;
        case FamilyKind::poisson:
            for (Eigen::Index i = 0; i < eta.size(); ++i)
                y[i] = static_cast<double>(
                    rng.poisson(std::exp(std::clamp(eta[i], -700.0, 700.0))));
            break;
    }
}

Dataset make_dataset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     bool add_intercept) {
    Dataset d;
    d.has_intercept = add_intercept;
    d.y = y;
    const int n = static_cast<int>(X.rows()), p = static_cast<int>(X.cols());
    d.X.resize(n, p + (add_intercept ? 1 : 0));
    if (add_intercept) {
        d.X.col(0).setOnes();
        d.names.push_back("(intercept)");
    }
    d.X.rightCols(p) = X;
    for (int j = 1; j <= p; ++j) d.names.push_back("x" + std::to_string(j));
    return d;
}

}  // namespace

Dataset SimData::train_dataset(bool add_intercept) const {
    return make_dataset(X_train, y_train, add_intercept);
}

Dataset SimData::test_dataset(bool add_intercept) const {
    return make_dataset(X_test, y_test, add_intercept);
}

SimData simulate(const SimConfig& config) {
    config.validate();
    Rng rng_beta(Rng::mix(config.seed, 0x6265u /*"be"*/));
    Rng rng_train(Rng::mix(config.seed, 0x7472u /*"tr"*/));
    Rng rng_test(Rng::mix(config.seed, 0x7465u /*"te"*/));

    SimData out;
    out.beta = Eigen::VectorXd::Zero(config.p);
    // partial Fisher-Yates for the s support positions
    std::vector<int> idx(config.p);
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < config.s; ++k) {
        const int r = k + static_cast<int>(rng_beta.uniform() * (config.p - k));
        std::swap(idx[k], idx[std::min(r, config.p - 1)]);
    }
    for (int k = 0; k < config.s; ++k) {
        double v = 0.0;
        switch (config.beta_dist) {
            case BetaDist::normal: v = rng_beta.normal(); break;
            case BetaDist::laplace: v = rng_beta.laplace(); break;
            case BetaDist::constant1: v = 1.0; break;
            case BetaDist::uniform: v = 2.0 * rng_beta.uniform() - 1.0; break;
        }
        out.beta[idx[k]] = v;
    }

    draw_design(out.X_train, config.n, config.p, config.rho, config.corr_model,
                rng_train);
    draw_response(out.y_train, out.X_train, out.beta, config.family, rng_train);
    if (config.n_test > 0) {
        draw_design(out.X_test, config.n_test, config.p, config.rho, config.corr_model,
                    rng_test);
        draw_response(out.y_test, out.X_test, out.beta, config.family, rng_test);
    }
    return out;
}

}  // namespace ebglm
