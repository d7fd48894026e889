#include "ebglm/bnm.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ebglm/errors.hpp"
#include "ebglm/special.hpp"

namespace ebglm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSqrtPi = 1.7724538509055160272981674833411452;

void check_inputs(double z, double s2) {
    if (!std::isfinite(z)) throw NumericError("normal-means observation z is not finite");
    if (!(s2 > 0.0) || !std::isfinite(s2))
        throw NumericError("normal-means variance s2 must be finite and > 0");
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

// log(e^{la} - e^{lb}) with sign, for la, lb arbitrary.
struct SignedLog {
    double lg;
    double sign;
};

SignedLog logdiffexp(double la, double lb) {
    if (la == lb) return {kNegInf, 0.0};
    if (la > lb) return {la + std::log1p(-std::exp(lb - la)), 1.0};
    return {lb + std::log1p(-std::exp(la - lb)), -1.0};
}

// ---- point-Laplace slab --------------------------------------------------
//
// The slab marginal density of Laplace(0, b) convolved with N(0, s2) is
//   S(z) = (1/4b) [ e^{A1} erfc(t1) + e^{A2} erfc(t2) ],
//   A12  = (s2 -+ 2 b z) / (2 b^2),   t12 = (s2 -+ b z) / (sqrt(2 s2) b),
// and A - t^2 == -z^2 / (2 s2) holds exactly on both sides. Each side is
// kept as lg = log(e^A erfc(t)): the erfcx form when t >= 0, and
// A + log(erfc(t)) when t < 0 (erfc is then in (1, 2), no overflow).
struct LaplaceSides {
    double lg1, lg2;       // log(e^{A_i} erfc(t_i))
    double t1, t2, a1, a2;
};

LaplaceSides laplace_sides(double z, double b, double s2) {
    LaplaceSides r;
    const double sb = std::sqrt(2.0 * s2) * b;
    r.t1 = (s2 - b * z) / sb;
    r.t2 = (s2 + b * z) / sb;
    r.a1 = (s2 - 2.0 * b * z) / (2.0 * b * b);
    r.a2 = (s2 + 2.0 * b * z) / (2.0 * b * b);
    const double lkernel = -z * z / (2.0 * s2);  // A_i - t_i^2, exactly
    r.lg1 = r.t1 >= 0.0 ? lkernel + std::log(erfcx(r.t1)) : r.a1 + std::log(std::erfc(r.t1));
    r.lg2 = r.t2 >= 0.0 ? lkernel + std::log(erfcx(r.t2)) : r.a2 + std::log(std::erfc(r.t2));
    return r;
}

double laplace_log_slab(double z, double b, double s2) {
    const LaplaceSides r = laplace_sides(z, b, s2);
    return -std::log(4.0 * b) + logsumexp2(r.lg1, r.lg2);
}

// ---- mixture-of-normals helpers -------------------------------------------
//
// point-normal and normal-mixture marginals are finite mixtures of
// N(0, s2 + sigma2_k); all component work is done through one generic
// walker to keep the log-sum-exp handling in a single place.

template <typename F>
void for_each_component(const Prior& prior, double s2, F&& f) {
    // f(index, log weight, total variance s2 + sigma2_k, sigma2_k)
    if (const auto* pn = std::get_if<PointNormal>(&prior)) {
        f(0, safe_log(pn->pi0), s2, 0.0);
        f(1, safe_log(1.0 - pn->pi0), s2 + pn->sigma2, pn->sigma2);
    } else {
        const auto& mx = std::get<NormalMixture>(prior);
        for (int k = 0; k < mx.weights.size(); ++k)
            f(k, safe_log(mx.weights[k]), s2 + mx.variances[k], mx.variances[k]);
    }
}

double mixture_loglik(double z, const Prior& prior, double s2) {
    double m = kNegInf;
    for_each_component(prior, s2, [&](int, double lw, double v, double) {
        m = std::max(m, lw + log_normal_pdf(z, 0.0, v));
    });
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for_each_component(prior, s2, [&](int, double lw, double v, double) {
        sum += std::exp(lw + log_normal_pdf(z, 0.0, v) - m);
    });
    return m + std::log(sum);
}

}  // namespace

double marginal_loglik(double z, const Prior& prior, double s2) {
    check_inputs(z, s2);
    if (const auto* pl = std::get_if<PointLaplace>(&prior)) {
        const double lspike = safe_log(pl->pi0) + log_normal_pdf(z, 0.0, s2);
        const double lslab = safe_log(1.0 - pl->pi0) + laplace_log_slab(z, pl->scale, s2);
        return logsumexp2(lspike, lslab);
    }
    return mixture_loglik(z, prior, s2);
}

double marginal_loglik_d1(double z, const Prior& prior, double s2) {
    check_inputs(z, s2);
    if (const auto* pl = std::get_if<PointLaplace>(&prior)) {
        const double logL = marginal_loglik(z, prior, s2);
        // L'(z) = -(z/s2) pi0 N(z;0,s2) + (1-pi0)(E2 - E1)/(4 b^2)
        const LaplaceSides r = laplace_sides(z, pl->scale, s2);
        double d = 0.0;
        if (pl->pi0 > 0.0 && z != 0.0) {
            const double la = safe_log(pl->pi0) + log_normal_pdf(z, 0.0, s2) +
                              std::log(std::abs(z) / s2);
            d -= std::copysign(std::exp(la - logL), z);
        }
        if (pl->pi0 < 1.0) {
            const SignedLog diff = logdiffexp(r.lg2, r.lg1);
            if (diff.sign != 0.0) {
                const double lb = safe_log(1.0 - pl->pi0) + diff.lg -
                                  std::log(4.0 * pl->scale * pl->scale);
                d += diff.sign * std::exp(lb - logL);
            }
        }
        return d;
    }
    // sum_k w_k * (-z / v_k) with posterior component weights w_k
    const double logL = mixture_loglik(z, prior, s2);
    double acc = 0.0;
    for_each_component(prior, s2, [&](int, double lw, double v, double) {
        const double w = std::exp(lw + log_normal_pdf(z, 0.0, v) - logL);
        acc += w * (-z / v);
    });
    return acc;
}

double posterior_mean(double z, const Prior& prior, double s2) {
    if (z == 0.0) {
        check_inputs(z, s2);
        return 0.0;
    }
    return z + s2 * marginal_loglik_d1(z, prior, s2);
}

double posterior_variance(double z, const Prior& prior, double s2) {
    check_inputs(z, s2);
    double var;
    if (std::holds_alternative<PointLaplace>(prior)) {
        const double h = 1e-5;
        const double l2 = (marginal_loglik_d1(z + h, prior, s2) -
                           marginal_loglik_d1(z - h, prior, s2)) /
                          (2.0 * h);
        var = s2 * (1.0 + s2 * l2);
    } else {
        // mixture posterior: component k is N(m_k, v_k) with conjugate moments
        const double logL = mixture_loglik(z, prior, s2);
        double mean = 0.0, second = 0.0;
        for_each_component(prior, s2, [&](int, double lw, double v, double sig2) {
            const double w = std::exp(lw + log_normal_pdf(z, 0.0, v) - logL);
            const double mk = z * sig2 / v;
            const double vk = s2 * sig2 / v;
            mean += w * mk;
            second += w * (mk * mk + vk);
        });
        var = second - mean * mean;
    }
    if (var < 0.0) {
        if (var < -1e-10 * s2)
            std::fprintf(stderr,
                         "ebglm: posterior variance %.3e clamped to 0 (z=%.3g, s2=%.3g)\n",
                         var, z, s2);
        var = 0.0;
    }
    return var;
}

double posterior_nonzero_prob(double z, const Prior& prior, double s2) {
    check_inputs(z, s2);
    double spike_lw = kNegInf;
    if (const auto* pn = std::get_if<PointNormal>(&prior)) {
        spike_lw = safe_log(pn->pi0);
    } else if (const auto* pl = std::get_if<PointLaplace>(&prior)) {
        spike_lw = safe_log(pl->pi0);
    } else {
        const auto& mx = std::get<NormalMixture>(prior);
        if (mx.variances[0] != 0.0)
            throw ConfigError("posterior_nonzero_prob needs a spike component");
        spike_lw = safe_log(mx.weights[0]);
    }
    if (spike_lw == kNegInf) return 1.0;
    const double logL = marginal_loglik(z, prior, s2);
    const double w0 = std::exp(spike_lw + log_normal_pdf(z, 0.0, s2) - logL);
    return std::clamp(1.0 - w0, 0.0, 1.0);
}

double invert_posterior_mean(double theta, const Prior& prior, double s2, double tol) {
    check_inputs(theta, s2);
    if (!(tol > 0.0)) throw ConfigError("root tolerance must be > 0");
    if (theta == 0.0) return 0.0;
    if (prior_is_pure_spike(prior))
        throw NumericError("cannot invert the posterior mean of a pure spike prior");

    const auto pm = [&](double z) { return posterior_mean(z, prior, s2); };
    // shrinkage puts the root beyond theta on the same side of zero
    const bool pos = theta > 0.0;
    const auto short_of_target = [&](double v) { return pos ? v < theta : v > theta; };

    double lo = theta, hi = theta;
    bool bracketed = false;
    for (int k = 1; k <= 200; ++k) {
        hi = theta * std::ldexp(1.0, k);  // theta * 2^k
        const double v = pm(hi);
        if (!std::isfinite(v))
            throw NumericError("posterior mean overflowed while bracketing the inverse map");
        if (!short_of_target(v)) {
            bracketed = true;
            break;
        }
        lo = hi;
    }
    if (!bracketed)
        throw NumericError("inverse posterior-mean bracket not found after 200 doublings "
                           "(prior is effectively a pure spike)");

    for (int it = 0; it < 500 && std::abs(hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (short_of_target(pm(mid)))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Eigen::VectorXd marginal_loglik_dprior(double z, const Prior& prior, double s2) {
    check_inputs(z, s2);
    if (const auto* pn = std::get_if<PointNormal>(&prior)) {
        const double logL = marginal_loglik(z, prior, s2);
        const double w0 =
            std::exp(safe_log(pn->pi0) + log_normal_pdf(z, 0.0, s2) - logL);
        const double v = s2 + pn->sigma2;
        const double w1 =
            std::exp(safe_log(1.0 - pn->pi0) + log_normal_pdf(z, 0.0, v) - logL);
        Eigen::VectorXd g(2);
        g[0] = (1.0 - pn->pi0) * w0 - pn->pi0 * w1;
        g[1] = w1 * pn->sigma2 * (z * z - v) / (2.0 * v * v);
        return g;
    }
    if (const auto* pl = std::get_if<PointLaplace>(&prior)) {
        const double logL = marginal_loglik(z, prior, s2);
        const double b = pl->scale;
        const LaplaceSides r = laplace_sides(z, b, s2);
        const double log_slab = -std::log(4.0 * b) + logsumexp2(r.lg1, r.lg2);
        const double w0 =
            std::exp(safe_log(pl->pi0) + log_normal_pdf(z, 0.0, s2) - logL);
        const double w1 = std::exp(safe_log(1.0 - pl->pi0) + log_slab - logL);

        // d log L / d log b = (1-pi0) b dS/db / L with
        //   dS/db = -S/b + (A1' E1 + A2' E2)/(4b) + (s2/b^3) N(z;0,s2),
        // i.e. -w1 plus the two terms below after the chain rule.
        const double a1p = -s2 / (b * b * b) + z / (b * b);
        const double a2p = -s2 / (b * b * b) - z / (b * b);
        const double l1p = safe_log(1.0 - pl->pi0);
        double mid = 0.0;
        if (a1p != 0.0)
            mid += std::copysign(
                std::exp(l1p + std::log(std::abs(a1p)) + r.lg1 - std::log(4.0) - logL),
                a1p);
        if (a2p != 0.0)
            mid += std::copysign(
                std::exp(l1p + std::log(std::abs(a2p)) + r.lg2 - std::log(4.0) - logL),
                a2p);
        const double tail =
            (s2 / (b * b)) * std::exp(l1p + log_normal_pdf(z, 0.0, s2) - logL);

        Eigen::VectorXd g(2);
        g[0] = (1.0 - pl->pi0) * w0 - pl->pi0 * w1;
        g[1] = -w1 + mid + tail;
        return g;
    }
    // softmax with the last logit pinned: d log L / d u_j = w_j - pi_j
    const auto& mx = std::get<NormalMixture>(prior);
    const double logL = mixture_loglik(z, prior, s2);
    const int K = static_cast<int>(mx.weights.size()) - 1;
    Eigen::VectorXd g(K);
    for (int k = 0; k < K; ++k) {
        const double w = std::exp(safe_log(mx.weights[k]) +
                                  log_normal_pdf(z, 0.0, s2 + mx.variances[k]) - logL);
        g[k] = w - mx.weights[k];
    }
    return g;
}

}  // namespace ebglm
