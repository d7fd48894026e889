#include "ebglm/dataset.hpp"

#include <cmath>

#include "ebglm/errors.hpp"

namespace ebglm {

namespace {

std::string column_label(const Dataset& data, int j) {
    if (j < static_cast<int>(data.names.size()) && !data.names[j].empty())
        return "'" + data.names[j] + "'";
    return "#" + std::to_string(j + 1);
}

}  // namespace

void validate_dataset(const Dataset& data) {
    if (data.X.rows() == 0 || data.X.cols() == 0)
        throw ConfigError("dataset is empty");
    if (data.y.size() != data.X.rows())
        throw ConfigError("response length does not match the number of rows");
    if (!data.X.allFinite() || !data.y.allFinite())
        throw ConfigError("dataset contains non-finite values");
    if (data.has_intercept) {
        if ((data.X.col(0).array() != 1.0).any())
            throw ConfigError("intercept column is not all ones");
    }
    const int j0 = data.has_intercept ? 1 : 0;
    for (int j = j0; j < data.p(); ++j) {
        const auto col = data.X.col(j);
        if (col.squaredNorm() == 0.0)
            throw ConfigError("column " + column_label(data, j) + " is all zeros");
        if (data.has_intercept && (col.array() == col[0]).all())
            throw ConfigError("column " + column_label(data, j) +
                              " is constant (collinear with the intercept)");
    }
}

void standardize(Dataset& data) {
    const int n = data.n(), p = data.p();
    Standardization st;
    st.center = Eigen::VectorXd::Zero(p);
    st.scale = Eigen::VectorXd::Ones(p);
    const int j0 = data.has_intercept ? 1 : 0;
    for (int j = j0; j < p; ++j) {
        const double m = data.X.col(j).mean();
        const double sd = std::sqrt((data.X.col(j).array() - m).square().sum() / n);
        if (!(sd > 0.0))
            throw ConfigError("cannot standardize constant column " +
                              column_label(data, j));
        st.center[j] = m;
        st.scale[j] = sd;
        data.X.col(j) = (data.X.col(j).array() - m) / sd;
    }
    data.standardization = st;
}

}  // namespace ebglm
