#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ebglm {

// Benchmark grid specification read from a small TOML file. List-valued
// keys are sweep axes whose Cartesian product defines the grid cells
// (in row-major n, p, s, rho, beta_dist order); scalar keys apply to every
// cell. Accepted keys:
//   n, p, s        integer lists (or scalars)
//   rho            number list (or scalar)
//   beta_dist      string list (or scalar): normal|laplace|constant1|uniform
//   family         "logistic" | "gaussian" | "poisson"
//   prior          "point-normal" | "point-laplace" | "ash"
//   dispersion     number (gaussian only)
//   n_test         integer
//   ash_K          integer
//   corr_model     "equicorrelated" | "ar1"
// Only the TOML subset needed here is parsed: `key = value` lines with
// numbers, quoted strings, booleans and flat arrays; `#` comments.
struct GridFile {
    std::vector<int> n{500};
    std::vector<int> p{1000};
    std::vector<int> s{20};
    std::vector<double> rho{0.0};
    std::vector<std::string> beta_dist{"normal"};
    std::string family = "logistic";
    std::string prior = "point-normal";
    std::string corr_model = "equicorrelated";
    double dispersion = 1.0;
    int n_test = 2000;
    int ash_K = 20;

    int n_cells() const {
        return static_cast<int>(n.size() * p.size() * s.size() * rho.size() *
                                beta_dist.size());
    }
};

GridFile parse_grid_file(const std::string& path);

}  // namespace ebglm
