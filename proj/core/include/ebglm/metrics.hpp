#pragma once

#include <Eigen/Core>

namespace ebglm {

// Rank-based AUC (Mann-Whitney with midranks for ties): the probability
// that a uniformly chosen positive outranks a uniformly chosen negative,
// ties counting one half. Throws ConfigError on single-class input.
double auc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels);

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& observed);

// Mean Poisson deviance 2[y log(y/mu) - (y - mu)] with the y = 0 limit 2mu.
double mean_poisson_deviance(const Eigen::VectorXd& mu, const Eigen::VectorXd& y);

}  // namespace ebglm
