#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ebglm {

struct SolverConfig {
    int memory = 10;            // L-BFGS history size m
    int inner_max_iter = 200;   // quasi-Newton iterations per s2 refresh
    int outer_max_iter = 50;    // s2 refresh rounds
    double grad_tol = 1e-5;     // inf-norm gradient stop
    double obj_rel_tol = 1e-8;  // relative objective-change stop
    double ls_contraction = 0.5;  // backtracking factor
    double ls_c1 = 1e-4;          // Armijo constant
    double root_tol = 1e-10;      // bisection bracket width for z_g(theta)
    std::uint64_t seed = 0;

    void validate() const;
};

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

enum class StopReason { grad_tol, obj_tol, max_iter, stall };

struct LbfgsResult {
    Eigen::VectorXd x;
    double fx = 0.0;
    std::vector<double> trace;  // accepted objective values, f(x0) first
    int iterations = 0;
    bool stalled = false;
    StopReason reason = StopReason::max_iter;
};

// Limited-memory BFGS (two-loop recursion) with Armijo backtracking.
// Non-finite trial values force backtracking; if 60 halvings fail, one
// steepest-descent retry is attempted before stopping with the stall flag.
// Every accepted step decreases f, so the trace is strictly decreasing.
LbfgsResult lbfgs_minimize(const ObjectiveFn& f, const GradientFn& grad,
                           const Eigen::VectorXd& x0, const SolverConfig& config);

}  // namespace ebglm
