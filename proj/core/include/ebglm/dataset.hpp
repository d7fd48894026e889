#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace ebglm {

// Per-column centering/scale applied to the non-intercept columns of X.
struct Standardization {
    Eigen::VectorXd center;  // length p; 0 for the intercept column
    Eigen::VectorXd scale;   // length p; 1 for the intercept column
};

struct Dataset {
    Eigen::MatrixXd X;  // n x p, dense; column 0 is all ones if has_intercept
    Eigen::VectorXd y;  // length n
    bool has_intercept = true;
    std::vector<std::string> names;  // column names, length p
    std::optional<Standardization> standardization;

    int n() const { return static_cast<int>(X.rows()); }
    int p() const { return static_cast<int>(X.cols()); }
};

// Checks shape, finiteness, the all-ones intercept column and rejects
// degenerate feature columns (all-zero anywhere; constant when an intercept
// is present). Throws ConfigError with the offending column named.
void validate_dataset(const Dataset& data);

// Center and scale the non-intercept columns in place and record the
// transform in data.standardization. No-op on the intercept column.
void standardize(Dataset& data);

}  // namespace ebglm
