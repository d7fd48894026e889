#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ebglm/dataset.hpp"

namespace ebglm {

struct CsvTable {
    std::vector<std::string> columns;  // synthesized col1..colN when headerless
    Eigen::MatrixXd values;
};

// Strict rectangular numeric CSV. Ragged rows, empty or non-numeric cells
// (including NaN/inf) are rejected with the offending row and column named.
CsvTable read_csv(const std::string& path, bool has_header);

// Splits off the response column (by header name, or 1-based index) and by
// default prepends an all-ones intercept column.
Dataset dataset_from_csv(const std::string& path, bool has_header,
                         const std::string& response, bool add_intercept,
                         std::string* response_name_out = nullptr);

// Loads feature columns for prediction: drops `drop_column` when a header
// names it, otherwise requires exactly the expected column count.
Eigen::MatrixXd features_from_csv(const std::string& path, bool has_header,
                                  const std::string& drop_column, int expected_cols);

// Shortest decimal that parses back to the same binary64 value.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values);

}  // namespace ebglm
