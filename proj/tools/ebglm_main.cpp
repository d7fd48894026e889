#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "ebglm/bench.hpp"
#include "ebglm/bnm.hpp"
#include "ebglm/csv.hpp"
#include "ebglm/errors.hpp"
#include "ebglm/family.hpp"
#include "ebglm/gridfile.hpp"
#include "ebglm/model_io.hpp"
#include "ebglm/penalty.hpp"
#include "ebglm/simulate.hpp"
#include "ebglm/solver.hpp"
#include "ebglm/verify.hpp"
#include "ebglm/version.hpp"

namespace {

using namespace ebglm;

struct GlobalOpts {
    bool quiet = false;
    int threads = std::max(1u, std::thread::hardware_concurrency());
};

std::map<std::string, double> parse_kv(const std::string& text) {
    std::map<std::string, double> out;
    if (text.empty()) return out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        const size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value in '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        double v = 0.0;
        const auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc() || p != val.data() + val.size())
            throw ConfigError("cannot parse number '" + val + "' for '" + key + "'");
        out[key] = v;
        start = end + 1;
    }
    return out;
}

double take(std::map<std::string, double>& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = it->second;
    kv.erase(it);
    return v;
}

Prior build_prior(const std::string& name, const std::string& params, int n_default,
                  int ash_K) {
    auto kv = parse_kv(params);
    Prior prior;
    if (name == "point-normal") {
        prior = PointNormal{take(kv, "pi0", 0.5), take(kv, "sigma2", 1.0)};
    } else if (name == "point-laplace") {
        prior = PointLaplace{take(kv, "pi0", 0.5), take(kv, "b", 1.0)};
    } else if (name == "ash") {
        const int n = static_cast<int>(take(kv, "n", n_default));
        const int K = static_cast<int>(take(kv, "K", ash_K));
        NormalMixture mx = make_uniform_ash(n, K);
        if (kv.count("pi0")) {
            const double pi0 = take(kv, "pi0", 0.0);
            mx.weights[0] = pi0;
            mx.weights.tail(K).setConstant((1.0 - pi0) / K);
        }
        prior = std::move(mx);
    } else {
        throw ConfigError("unknown prior '" + name +
                          "' (expected point-normal, point-laplace, or ash)");
    }
    if (!kv.empty())
        throw ConfigError("unknown prior parameter '" + kv.begin()->first + "' for " +
                          name);
    validate_prior(prior);
    return prior;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
    cmd->add_option("--m", cfg.memory, "L-BFGS memory size");
    cmd->add_option("--max-inner", cfg.inner_max_iter,
                    "max L-BFGS iterations per s2 refresh");
    cmd->add_option("--max-outer", cfg.outer_max_iter, "max s2 refresh rounds");
    cmd->add_option("--grad-tol", cfg.grad_tol, "gradient inf-norm stop");
    cmd->add_option("--obj-tol", cfg.obj_rel_tol, "relative objective-change stop");
    cmd->add_option("--root-tol", cfg.root_tol, "bisection bracket width for z_g(theta)");
    cmd->add_option("--seed", cfg.seed, "seed recorded in the model document");
}

Eigen::VectorXd read_theta_file(const std::string& path, int p) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open --init-theta file '" + path + "'");
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) != p)
        throw ConfigError("--init-theta has " + std::to_string(vals.size()) +
                          " values, expected " + std::to_string(p));
    return Eigen::Map<Eigen::VectorXd>(vals.data(), p);
}

// ---- subcommands ----------------------------------------------------------

int cmd_fit(const GlobalOpts& g, const std::string& data_path, bool no_header,
            const std::string& response, const std::string& family_name,
            double dispersion, const std::string& prior_name, int ash_K,
            bool no_intercept, bool do_standardize, bool fix_prior,
            const std::string& prior_init, const std::string& init_theta_path,
            const SolverConfig& cfg, const std::string& out_path) {
    const Family family = family_from_name(family_name, dispersion);
    std::string response_name;
    Dataset data =
        dataset_from_csv(data_path, !no_header, response, !no_intercept, &response_name);
    if (do_standardize) {
        if (!data.has_intercept)
            throw ConfigError("--standardize requires an intercept column");
        standardize(data);
    }
    const Prior prior = build_prior(prior_name, prior_init, data.n(), ash_K);

    FitOptions opts;
    opts.optimize_prior = !fix_prior;
    if (!init_theta_path.empty())
        opts.init_theta = read_theta_file(init_theta_path, data.p());
    if (!g.quiet) opts.progress = &std::cerr;

    FitResult res = fit(data, family, prior, cfg, opts);
    res.response_name = response_name;
    save_model(to_document(res, data.n()), out_path);
    if (!g.quiet)
        std::cerr << "fit: n=" << data.n() << " p=" << data.p()
                  << " h=" << res.objective_trace.back()
                  << " converged=" << (res.report.converged ? "yes" : "no")
                  << (res.report.stalled ? " (stalled)" : "") << " -> " << out_path
                  << "\n";
    if (res.report.stalled && !res.report.converged)
        throw NumericError("optimizer stalled before reaching the tolerances");
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                bool no_header, const std::string& type, const std::string& out_path) {
    const ModelDocument doc = load_model(model_path);
    const FitResult res = from_document(doc);
    const int expected = doc.p - (doc.has_intercept ? 1 : 0);
    const Eigen::MatrixXd X =
        features_from_csv(data_path, !no_header, doc.response_name, expected);
    const Eigen::VectorXd pred = predict(res, X, predict_kind_from_name(type));
    write_csv(out_path, {"prediction"}, pred);
    return 0;
}

int cmd_simulate(const SimConfig& cfg, const std::string& out_dir) {
    const SimData data = simulate(cfg);
    std::filesystem::create_directories(out_dir);
    const auto join = [&](const char* f) {
        return (std::filesystem::path(out_dir) / f).string();
    };
    std::vector<std::string> header;
    for (int j = 1; j <= cfg.p; ++j) header.push_back("x" + std::to_string(j));
    header.push_back("y");
    Eigen::MatrixXd train(cfg.n, cfg.p + 1);
    train.leftCols(cfg.p) = data.X_train;
    train.col(cfg.p) = data.y_train;
    write_csv(join("train.csv"), header, train);
    if (cfg.n_test > 0) {
        Eigen::MatrixXd test(cfg.n_test, cfg.p + 1);
        test.leftCols(cfg.p) = data.X_test;
        test.col(cfg.p) = data.y_test;
        write_csv(join("test.csv"), header, test);
    }
    std::ofstream beta(join("beta.csv"));
    if (!beta) throw ConfigError("cannot write beta.csv in '" + out_dir + "'");
    beta << "name,beta\n";
    for (int j = 0; j < cfg.p; ++j)
        beta << "x" << j + 1 << ',' << format_double(data.beta[j]) << '\n';
    return 0;
}

int cmd_bench(const GlobalOpts& g, const std::string& grid_path, int reps,
              std::uint64_t seed, const SolverConfig& cfg, const std::string& out_path) {
    const GridFile grid = parse_grid_file(grid_path);
    const BenchResult result =
        run_bench(grid, reps, seed, cfg, g.threads, g.quiet ? nullptr : &std::cerr);
    write_bench_csv(result, out_path);
    if (!g.quiet)
        std::cerr << "bench: wrote " << out_path << ", " << bench_summary_path(out_path)
                  << ", " << bench_timing_path(out_path) << "\n";
    return 0;
}

int cmd_penalty_curve(const std::string& prior_name, const std::string& params,
                      double s2, const std::string& grid_spec, double root_tol,
                      const std::string& out_path) {
    if (!(s2 > 0.0)) throw ConfigError("--s2 must be > 0");
    double lo = 0.0, hi = 0.0, step = 0.0;
    {
        const size_t c1 = grid_spec.find(':');
        const size_t c2 = c1 == std::string::npos ? c1 : grid_spec.find(':', c1 + 1);
        if (c2 == std::string::npos) throw ConfigError("--grid must look like lo:hi:step");
        try {
            lo = std::stod(grid_spec.substr(0, c1));
            hi = std::stod(grid_spec.substr(c1 + 1, c2 - c1 - 1));
            step = std::stod(grid_spec.substr(c2 + 1));
        } catch (const std::exception&) {
            throw ConfigError("--grid must look like lo:hi:step");
        }
        if (!(step > 0.0) || hi < lo)
            throw ConfigError("--grid needs hi >= lo, step > 0");
    }
    const Prior prior = build_prior(prior_name, params, 500, 20);
    std::vector<double> thetas;
    for (double t = lo; t <= hi + 0.5 * step; t += step) thetas.push_back(t);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(thetas.size()), 2);
    for (size_t i = 0; i < thetas.size(); ++i) {
        out(static_cast<Eigen::Index>(i), 0) = thetas[i];
        out(static_cast<Eigen::Index>(i), 1) =
            eval_penalty(thetas[i], prior, s2, root_tol).r;
    }
    write_csv(out_path, {"theta", "r"}, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ebglm: empirical Bayes generalized linear models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("ebglm ") + kVersion +
                                          " (model format " +
                                          std::to_string(kModelFormatVersion) + ")");
    GlobalOpts g;
    app.add_flag("--quiet", g.quiet, "suppress progress output on stderr");
    app.add_option("--threads", g.threads, "cap internal parallelism")
        ->check(CLI::PositiveNumber);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a model to a CSV dataset");
    std::string data_path, response = "y", family_name, prior_name = "point-normal";
    std::string prior_init, init_theta_path, out_path;
    double dispersion = 0.0;
    int ash_K = 20;
    bool no_header = false, no_intercept = false, do_standardize = false,
         fix_prior = false;
    SolverConfig fit_cfg;
    fit_cmd->add_option("--data", data_path, "training CSV")->required();
    fit_cmd->add_flag("--no-header", no_header, "CSV has no header row");
    fit_cmd->add_option("--response", response, "response column name or 1-based index");
    fit_cmd->add_option("--family", family_name, "gaussian | logistic | poisson")
        ->required();
    fit_cmd->add_option("--dispersion", dispersion, "sigma^2 (gaussian only)");
    fit_cmd->add_option("--prior", prior_name, "point-normal | point-laplace | ash");
    fit_cmd->add_option("--ash-K", ash_K, "ash grid size K (K+1 components)");
    fit_cmd->add_flag("--no-intercept", no_intercept, "do not prepend an intercept");
    fit_cmd->add_flag("--standardize", do_standardize,
                      "center/scale features before fitting");
    fit_cmd->add_flag("--fix-prior", fix_prior, "hold the prior at --prior-init");
    fit_cmd->add_option("--prior-init", prior_init,
                        "prior parameters, e.g. pi0=0.5,sigma2=1");
    fit_cmd->add_option("--init-theta", init_theta_path,
                        "warm-start coefficients (whitespace-separated, length p)");
    add_solver_flags(fit_cmd, fit_cfg);
    fit_cmd->add_option("--out", out_path, "model document path")->required();

    // predict
    auto* pred_cmd = app.add_subcommand("predict", "predict from a saved model");
    std::string model_path, pred_data, pred_type = "response", pred_out;
    bool pred_no_header = false;
    pred_cmd->add_option("--model", model_path, "model document")->required();
    pred_cmd->add_option("--data", pred_data, "feature CSV")->required();
    pred_cmd->add_flag("--no-header", pred_no_header, "CSV has no header row");
    pred_cmd->add_option("--type", pred_type, "link | response");
    pred_cmd->add_option("--out", pred_out, "output CSV")->required();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "write a synthetic dataset");
    SimConfig sim_cfg;
    std::string sim_beta = "normal", sim_corr = "equicorrelated",
                sim_family = "logistic", sim_out;
    double sim_dispersion = 1.0;
    sim_cmd->add_option("--n", sim_cfg.n, "training rows");
    sim_cmd->add_option("--p", sim_cfg.p, "features");
    sim_cmd->add_option("--s", sim_cfg.s, "nonzero coefficients");
    sim_cmd->add_option("--rho", sim_cfg.rho, "column correlation in [0, 0.99]");
    sim_cmd->add_option("--beta-dist", sim_beta, "normal | laplace | constant1 | uniform");
    sim_cmd->add_option("--corr-model", sim_corr, "equicorrelated | ar1");
    sim_cmd->add_option("--family", sim_family, "gaussian | logistic | poisson");
    sim_cmd->add_option("--dispersion", sim_dispersion, "sigma^2 (gaussian only)");
    sim_cmd->add_option("--n-test", sim_cfg.n_test, "test rows");
    sim_cmd->add_option("--seed", sim_cfg.seed, "RNG seed");
    sim_cmd->add_option("--out", sim_out, "output directory")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "grid benchmark: simulate+fit+score");
    std::string grid_path, bench_out = "results.csv";
    int reps = 10;
    std::uint64_t bench_seed = 1;
    SolverConfig bench_cfg;
    bench_cmd->add_option("--grid", grid_path, "grid TOML file")->required();
    bench_cmd->add_option("--reps", reps, "replications per cell");
    bench_cmd->add_option("--seed", bench_seed, "base seed");
    bench_cmd->add_option("--out", bench_out, "results CSV path");
    add_solver_flags(bench_cmd, bench_cfg);

    // penalty-curve
    auto* curve_cmd =
        app.add_subcommand("penalty-curve", "tabulate the penalty r(theta) on a grid");
    std::string curve_prior = "point-normal", curve_params, curve_grid, curve_out;
    double curve_s2 = 1.0, curve_root_tol = 1e-10;
    curve_cmd->add_option("--prior", curve_prior, "point-normal | point-laplace | ash");
    curve_cmd->add_option("--params", curve_params,
                          "prior parameters, e.g. pi0=0.8,sigma2=2");
    curve_cmd->add_option("--s2", curve_s2, "normal-means variance")->required();
    curve_cmd->add_option("--grid", curve_grid, "theta grid as lo:hi:step")->required();
    curve_cmd->add_option("--root-tol", curve_root_tol, "bisection tolerance");
    curve_cmd->add_option("--out", curve_out, "output CSV")->required();

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "run the numerical oracles and report pass/fail");
    std::string suite = "all";
    verify_cmd->add_option("--suite", suite, "bnm | penalty | gradient | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (fit_cmd->parsed())
            return cmd_fit(g, data_path, no_header, response, family_name, dispersion,
                           prior_name, ash_K, no_intercept, do_standardize, fix_prior,
                           prior_init, init_theta_path, fit_cfg, out_path);
        if (pred_cmd->parsed())
            return cmd_predict(model_path, pred_data, pred_no_header, pred_type, pred_out);
        if (sim_cmd->parsed()) {
            sim_cfg.beta_dist = beta_dist_from_name(sim_beta);
            sim_cfg.corr_model = corr_model_from_name(sim_corr);
            sim_cfg.family = family_from_name(sim_family, sim_dispersion);
            return cmd_simulate(sim_cfg, sim_out);
        }
        if (bench_cmd->parsed())
            return cmd_bench(g, grid_path, reps, bench_seed, bench_cfg, bench_out);
        if (curve_cmd->parsed())
            return cmd_penalty_curve(curve_prior, curve_params, curve_s2, curve_grid,
                                     curve_root_tol, curve_out);
        if (verify_cmd->parsed()) return run_verify_suite(suite, std::cout) ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
