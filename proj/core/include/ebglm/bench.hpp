#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ebglm/gridfile.hpp"
#include "ebglm/lbfgs.hpp"

namespace ebglm {

struct BenchCell {
    int n = 0, p = 0, s = 0;
    double rho = 0.0;
    std::string beta_dist;
};

struct BenchRow {
    int cell = 0;
    BenchCell params;
    int rep = 0;
    std::uint64_t seed = 0;
    std::string metric;   // auc | rmse | deviance
    double value = 0.0;   // NaN when status != ok
    std::string status;   // "ok" or an error message
    double wall_ms = 0.0; // kept out of the results CSV (see timing file)
};

struct BenchResult {
    std::vector<BenchRow> rows;  // deterministic (cell, rep) order
};

// Runs simulate -> fit -> test-set metric for every grid cell and
// replication. Seeds derive from (base_seed, cell index, rep index), each
// replication owns its RNG streams, and rows are merged in (cell, rep)
// order, so the emitted CSVs are identical for any thread count. Per-cell
// failures are recorded in the status column and the run continues.
BenchResult run_bench(const GridFile& grid, int reps, std::uint64_t base_seed,
                      const SolverConfig& solver, int threads,
                      std::ostream* progress = nullptr);

// results CSV plus a per-cell mean/sd summary at <stem>.summary.csv and
// wall-clock times at <stem>.timing.csv (timing is the one output that is
// not run-to-run reproducible, so it lives outside the results file).
void write_bench_csv(const BenchResult& result, const std::string& out_path);

std::string bench_summary_path(const std::string& out_path);
std::string bench_timing_path(const std::string& out_path);

}  // namespace ebglm
