#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "ebglm/dataset.hpp"
#include "ebglm/family.hpp"

namespace ebglm {

enum class BetaDist { normal, laplace, constant1, uniform };
enum class CorrModel { equicorrelated, ar1 };

BetaDist beta_dist_from_name(const std::string& name);
CorrModel corr_model_from_name(const std::string& name);
std::string to_string(BetaDist d);

struct SimConfig {
    int n = 500;
    int p = 1000;
    int s = 20;          // number of nonzero coefficients
    double rho = 0.0;    // column correlation in [0, 0.99]
    BetaDist beta_dist = BetaDist::normal;
    CorrModel corr_model = CorrModel::equicorrelated;
    Family family = Family::bernoulli();
    int n_test = 2000;
    std::uint64_t seed = 1;

    void validate() const;
};

// Rows of X are drawn with unit-variance Gaussian columns sharing pairwise
// correlation rho (a common latent factor), or an AR(1) profile when
// requested. s coefficient positions are chosen uniformly at random, their
// values drawn from beta_dist, the rest are zero; the intercept is 0 and
// y ~ family at eta = X beta. Train, test and beta use independent
// substreams of the seed, so the draws are reproducible stream by stream.
struct SimData {
    Eigen::MatrixXd X_train, X_test;  // raw features, no intercept column
    Eigen::VectorXd y_train, y_test;
    Eigen::VectorXd beta;  // length p

    Dataset train_dataset(bool add_intercept = true) const;
    Dataset test_dataset(bool add_intercept = true) const;
};

SimData simulate(const SimConfig& config);

}  // namespace ebglm
