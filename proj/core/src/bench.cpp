#include "ebglm/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "ebglm/csv.hpp"
#include "ebglm/errors.hpp"
#include "ebglm/metrics.hpp"
#include "ebglm/rng.hpp"
#include "ebglm/simulate.hpp"
#include "ebglm/solver.hpp"

namespace ebglm {

namespace {

std::vector<BenchCell> expand_cells(const GridFile& grid) {
    std::vector<BenchCell> cells;
    for (int n : grid.n)
        for (int p : grid.p)
            for (int s : grid.s)
                for (double rho : grid.rho)
                    for (const auto& bd : grid.beta_dist)
                        cells.push_back(BenchCell{n, p, s, rho, bd});
    return cells;
}

Prior default_prior(const std::string& name, int n, int ash_K) {
    if (name == "point-normal") return PointNormal{0.5, 1.0};
    if (name == "point-laplace") return PointLaplace{0.5, 1.0};
    if (name == "ash") return make_uniform_ash(n, ash_K);
    throw ConfigError("unknown prior '" + name +
                      "' (expected point-normal, point-laplace, or ash)");
}

BenchRow run_one(const GridFile& grid, const BenchCell& cell, int cell_idx, int rep,
                 std::uint64_t base_seed, const SolverConfig& solver_cfg) {
    BenchRow row;
    row.cell = cell_idx;
    row.params = cell;
    row.rep = rep;
    row.seed = Rng::mix(Rng::mix(base_seed, 0xC0FFEEu + cell_idx), rep);
    row.value = std::numeric_limits<double>::quiet_NaN();

    const auto t0 = std::chrono::steady_clock::now();
    try {
        SimConfig sim;
        sim.n = cell.n;
        sim.p = cell.p;
        sim.s = cell.s;
        sim.rho = cell.rho;
        sim.beta_dist = beta_dist_from_name(cell.beta_dist);
        sim.corr_model = corr_model_from_name(grid.corr_model);
        sim.family = family_from_name(grid.family, grid.dispersion);
        sim.n_test = grid.n_test;
        sim.seed = row.seed;
        const SimData data = simulate(sim);

        SolverConfig cfg = solver_cfg;
        cfg.seed = row.seed;
        const Dataset train = data.train_dataset();
        const FitResult fit_result =
            fit(train, sim.family, default_prior(grid.prior, sim.n, grid.ash_K), cfg);

        switch (sim.family.kind) {
            case FamilyKind::bernoulli:
                row.metric = "auc";
                row.value = auc(predict(fit_result, data.X_test, PredictKind::link),
                                data.y_test);
                break;
            case FamilyKind::gaussian:
                row.metric = "rmse";
                row.value = rmse(predict(fit_result, data.X_test, PredictKind::response),
                                 data.y_test);
                break;
            case FamilyKind::poisson:
                row.metric = "deviance";
                row.value = mean_poisson_deviance(
                    predict(fit_result, data.X_test, PredictKind::response), data.y_test);
                break;
        }
        row.status = "ok";
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        if (row.metric.empty()) row.metric = "auc";
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return row;
}

}  // namespace

BenchResult run_bench(const GridFile& grid, int reps, std::uint64_t base_seed,
                      const SolverConfig& solver, int threads,
                      std::ostream* progress) {
    if (reps < 1) throw ConfigError("bench: --reps must be >= 1");
    const std::vector<BenchCell> cells = expand_cells(grid);
    const int n_tasks = static_cast<int>(cells.size()) * reps;

    BenchResult result;
    result.rows.resize(n_tasks);
    std::atomic<int> next{0};
    std::atomic<int> done{0};

    const int n_workers = std::max(1, std::min(threads, n_tasks));
    const auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= n_tasks) return;
            const int cell_idx = t / reps;
            const int rep = t % reps;
            result.rows[t] =
                run_one(grid, cells[cell_idx], cell_idx, rep, base_seed, solver);
            done.fetch_add(1);
        }
    };
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (progress)
        (*progress) << "bench: " << done.load() << "/" << n_tasks << " runs finished\n";
    return result;
}

std::string bench_summary_path(const std::string& out_path) {
    const size_t dot = out_path.rfind('.');
    if (dot == std::string::npos) return out_path + ".summary.csv";
    return out_path.substr(0, dot) + ".summary" + out_path.substr(dot);
}

std::string bench_timing_path(const std::string& out_path) {
    const size_t dot = out_path.rfind('.');
    if (dot == std::string::npos) return out_path + ".timing.csv";
    return out_path.substr(0, dot) + ".timing" + out_path.substr(dot);
}

void write_bench_csv(const BenchResult& result, const std::string& out_path) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write '" + out_path + "'");
    out << "cell,n,p,s,rho,beta_dist,rep,seed,metric,value,status\n";
    for (const auto& r : result.rows) {
        out << r.cell << ',' << r.params.n << ',' << r.params.p << ',' << r.params.s
            << ',' << format_double(r.params.rho) << ',' << r.params.beta_dist << ','
            << r.rep << ',' << r.seed << ',' << r.metric << ','
            << format_double(r.value) << ',' << '"' << r.status << '"' << '\n';
    }
    out.close();

    std::ofstream sum(bench_summary_path(out_path));
    if (!sum) throw ConfigError("cannot write '" + bench_summary_path(out_path) + "'");
    sum << "cell,n,p,s,rho,beta_dist,metric,mean,sd,n_ok,n_failed\n";
    size_t i = 0;
    while (i < result.rows.size()) {
        size_t j = i;
        while (j < result.rows.size() && result.rows[j].cell == result.rows[i].cell) ++j;
        double acc = 0.0;
        int n_ok = 0, n_fail = 0;
        for (size_t k = i; k < j; ++k) {
            if (result.rows[k].status == "ok") {
                acc += result.rows[k].value;
                ++n_ok;
            } else {
                ++n_fail;
            }
        }
        const double mean = n_ok ? acc / n_ok : std::numeric_limits<double>::quiet_NaN();
        double ss = 0.0;
        for (size_t k = i; k < j; ++k)
            if (result.rows[k].status == "ok") {
                const double d = result.rows[k].value - mean;
                ss += d * d;
            }
        const double sd =
            n_ok > 1 ? std::sqrt(ss / (n_ok - 1)) : std::numeric_limits<double>::quiet_NaN();
        const auto& r = result.rows[i];
        sum << r.cell << ',' << r.params.n << ',' << r.params.p << ',' << r.params.s
            << ',' << format_double(r.params.rho) << ',' << r.params.beta_dist << ','
            << r.metric << ',' << format_double(mean) << ',' << format_double(sd) << ','
            << n_ok << ',' << n_fail << '\n';
        i = j;
    }
    sum.close();

    std::ofstream tim(bench_timing_path(out_path));
    if (!tim) throw ConfigError("cannot write '" + bench_timing_path(out_path) + "'");
    tim << "cell,rep,wall_ms\n";
    for (const auto& r : result.rows)
        tim << r.cell << ',' << r.rep << ',' << format_double(r.wall_ms) << '\n';
}

}  // namespace ebglm
