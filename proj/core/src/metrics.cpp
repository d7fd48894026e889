#include "ebglm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ebglm/errors.hpp"

namespace ebglm {

double auc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels) {
    const Eigen::Index n = scores.size();
    if (labels.size() != n) throw ConfigError("auc: scores/labels length mismatch");
    long n_pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels[i] != 0.0 && labels[i] != 1.0)
            throw ConfigError("auc: labels must be 0/1");
        n_pos += labels[i] == 1.0;
    }
    const long n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw ConfigError("auc: needs at least one positive and one negative label");

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return scores[a] < scores[b]; });

    // midranks over tie groups, accumulated for the positives
    double rank_sum_pos = 0.0;
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k)
            if (labels[order[k]] == 1.0) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& observed) {
    if (predicted.size() != observed.size())
        throw ConfigError("rmse: length mismatch");
    return std::sqrt((predicted - observed).squaredNorm() / predicted.size());
}

double mean_poisson_deviance(const Eigen::VectorXd& mu, const Eigen::VectorXd& y) {
    if (mu.size() != y.size()) throw ConfigError("deviance: length mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!(mu[i] > 0.0)) throw ConfigError("deviance: predicted mean must be > 0");
        if (y[i] == 0.0)
            acc += 2.0 * mu[i];
        else
            acc += 2.0 * (y[i] * std::log(y[i] / mu[i]) - (y[i] - mu[i]));
    }
    return acc / y.size();
}

}  // namespace ebglm
