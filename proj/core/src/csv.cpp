#include "ebglm/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ebglm/errors.hpp"

namespace ebglm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(trim(std::string_view(line).substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

double parse_cell(const std::string& cell, size_t row, size_t col,
                  const std::string& path) {
    const auto fail = [&](const char* why) {
        throw ConfigError(path + ": " + why + " at row " + std::to_string(row) +
                          ", column " + std::to_string(col) + " ('" + cell + "')");
    };
    if (cell.empty()) fail("empty cell");
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail("non-numeric cell");
    if (!std::isfinite(v)) fail("non-finite cell");
    return v;
}

}  // namespace

CsvTable read_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    size_t lineno = 0;
    size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (header.empty() && has_header) {
            for (auto& c : cells)
                if (c.empty())
                    throw ConfigError(path + ": empty header name in column " +
                                      std::to_string(&c - cells.data() + 1));
            header = std::move(cells);
            width = header.size();
            continue;
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw ConfigError(path + ": row " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(width));
        std::vector<double> row(width);
        for (size_t j = 0; j < width; ++j)
            row[j] = parse_cell(cells[j], lineno, j + 1, path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError(path + ": no data rows");

    CsvTable t;
    if (has_header) {
        t.columns = header;
    } else {
        for (size_t j = 1; j <= width; ++j) t.columns.push_back("col" + std::to_string(j));
    }
    t.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(width));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j)
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
    return t;
}

namespace {

int resolve_column(const CsvTable& t, const std::string& spec, const std::string& path) {
    for (size_t j = 0; j < t.columns.size(); ++j)
        if (t.columns[j] == spec) return static_cast<int>(j);
    // fall back to a 1-based index
    int idx = 0;
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), idx);
    if (ec == std::errc() && ptr == spec.data() + spec.size() && idx >= 1 &&
        idx <= static_cast<int>(t.columns.size()))
        return idx - 1;
    throw ConfigError(path + ": response column '" + spec +
                      "' not found (give a header name or 1-based index)");
}

}  // namespace

Dataset dataset_from_csv(const std::string& path, bool has_header,
                         const std::string& response, bool add_intercept,
                         std::string* response_name_out) {
    const CsvTable t = read_csv(path, has_header);
    const int ycol = resolve_column(t, response, path);
    const int n = static_cast<int>(t.values.rows());
    const int nfeat = static_cast<int>(t.values.cols()) - 1;
    if (nfeat < 1) throw ConfigError(path + ": no feature columns besides the response");

    Dataset d;
    d.has_intercept = add_intercept;
    d.y = t.values.col(ycol);
    const int p = nfeat + (add_intercept ? 1 : 0);
    d.X.resize(n, p);
    d.names.clear();
    int out = 0;
    if (add_intercept) {
        d.X.col(0).setOnes();
        d.names.push_back("(intercept)");
        out = 1;
    }
    for (int j = 0; j < static_cast<int>(t.values.cols()); ++j) {
        if (j == ycol) continue;
        d.X.col(out) = t.values.col(j);
        d.names.push_back(t.columns[j]);
        ++out;
    }
    if (response_name_out) *response_name_out = t.columns[ycol];
    validate_dataset(d);
    return d;
}

Eigen::MatrixXd features_from_csv(const std::string& path, bool has_header,
                                  const std::string& drop_column, int expected_cols) {
    const CsvTable t = read_csv(path, has_header);
    int drop = -1;
    if (has_header && !drop_column.empty()) {
        for (size_t j = 0; j < t.columns.size(); ++j)
            if (t.columns[j] == drop_column) drop = static_cast<int>(j);
    }
    const int have = static_cast<int>(t.values.cols()) - (drop >= 0 ? 1 : 0);
    if (have != expected_cols)
        throw ConfigError(path + ": has " + std::to_string(have) +
                          " feature columns, model expects " +
                          std::to_string(expected_cols));
    Eigen::MatrixXd X(t.values.rows(), have);
    int out = 0;
    for (int j = 0; j < static_cast<int>(t.values.cols()); ++j) {
        if (j == drop) continue;
        X.col(out++) = t.values.col(j);
    }
    return X;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    for (size_t j = 0; j < header.size(); ++j)
        out << (j ? "," : "") << header[j];
    out << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            out << (j ? "," : "") << format_double(values(i, j));
        out << '\n';
    }
    if (!out) throw ConfigError("failed while writing '" + path + "'");
}

}  // namespace ebglm
