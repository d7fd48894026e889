#include "ebglm/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "ebglm/errors.hpp"

namespace ebglm {

void SolverConfig::validate() const {
    if (memory < 1) throw ConfigError("solver memory m must be >= 1");
    if (inner_max_iter < 1 || outer_max_iter < 1)
        throw ConfigError("iteration limits must be >= 1");
    if (!(grad_tol > 0.0) || !(obj_rel_tol > 0.0) || !(root_tol > 0.0))
        throw ConfigError("solver tolerances must be > 0");
    if (!(ls_contraction > 0.0 && ls_contraction < 1.0))
        throw ConfigError("line-search contraction must be in (0, 1)");
    if (!(ls_c1 > 0.0 && ls_c1 < 1.0))
        throw ConfigError("Armijo constant must be in (0, 1)");
}

namespace {

struct Pair {
    Eigen::VectorXd s, y;
    double rho;
};

// H0 = gamma I with gamma = s'y / y'y from the most recent pair.
Eigen::VectorXd two_loop(const std::deque<Pair>& mem, const Eigen::VectorXd& g) {
    Eigen::VectorXd q = g;
    std::vector<double> alpha(mem.size());
    for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
        alpha[i] = mem[i].rho * mem[i].s.dot(q);
        q -= alpha[i] * mem[i].y;
    }
    const auto& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
    for (size_t i = 0; i < mem.size(); ++i) {
        const double beta = mem[i].rho * mem[i].y.dot(q);
        q += (alpha[i] - beta) * mem[i].s;
    }
    return q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const ObjectiveFn& f, const GradientFn& grad,
                           const Eigen::VectorXd& x0, const SolverConfig& config) {
    config.validate();
    constexpr int kMaxBacktracks = 60;

    LbfgsResult res;
    res.x = x0;
    res.fx = f(res.x);
    if (!std::isfinite(res.fx))
        throw NumericError("objective is not finite at the starting point");
    res.trace.push_back(res.fx);

    Eigen::VectorXd g = grad(res.x);
    if (!g.allFinite())
        throw NumericError("gradient is not finite at the starting point");

    std::deque<Pair> mem;

    for (int iter = 1; iter <= config.inner_max_iter; ++iter) {
        if (g.lpNorm<Eigen::Infinity>() < config.grad_tol) {
            res.reason = StopReason::grad_tol;
            return res;
        }

        Eigen::VectorXd d;
        if (mem.empty()) {
            d = -g / g.norm();  // cold-start scaling
        } else {
            d = -two_loop(mem, g);
            if (!(g.dot(d) < 0.0)) {  // not a descent direction; reset
                mem.clear();
                d = -g / g.norm();
            }
        }

        // Armijo backtracking from alpha = 1, with one steepest-descent
        // retry if the quasi-Newton direction cannot make progress.
        double ft = 0.0;
        Eigen::VectorXd xt;
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1) {
                mem.clear();
                d = -g / g.norm();
            }
            const double gd = g.dot(d);
            double alpha = 1.0;
            for (int ls = 0; ls < kMaxBacktracks; ++ls) {
                xt = res.x + alpha * d;
                ft = f(xt);
                if (std::isfinite(ft) && ft <= res.fx + config.ls_c1 * alpha * gd) {
                    accepted = true;
                    break;
                }
                alpha *= config.ls_contraction;
            }
        }
        if (!accepted) {
            res.stalled = true;
            res.reason = StopReason::stall;
            return res;
        }

        Eigen::VectorXd gt = grad(xt);
        const double f_prev = res.fx;
        res.iterations = iter;
        res.trace.push_back(ft);
        if (gt.allFinite()) {
            Pair pr{xt - res.x, gt - g, 0.0};
            const double sy = pr.s.dot(pr.y);
            if (sy > 1e-10 * pr.s.norm() * pr.y.norm()) {
                pr.rho = 1.0 / sy;
                mem.push_back(std::move(pr));
                if (static_cast<int>(mem.size()) > config.memory) mem.pop_front();
            }
        }
        res.x = std::move(xt);
        res.fx = ft;
        if (!gt.allFinite()) {
            res.stalled = true;
            res.reason = StopReason::stall;
            return res;
        }
        g = std::move(gt);

        if (std::abs(f_prev - ft) <= config.obj_rel_tol * std::max(1.0, std::abs(ft))) {
            res.reason = StopReason::obj_tol;
            return res;
        }
    }
    res.reason = StopReason::max_iter;
    return res;
}

}  // namespace ebglm
