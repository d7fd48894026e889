#include "ebglm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "ebglm/errors.hpp"
#include "ebglm/special.hpp"

namespace ebglm::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// spike weight and the log-density of the normalized continuous part
double spike_weight(const Prior& prior) {
    if (const auto* pn = std::get_if<PointNormal>(&prior)) return pn->pi0;
    if (const auto* pl = std::get_if<PointLaplace>(&prior)) return pl->pi0;
    return std::get<NormalMixture>(prior).weights[0];
}

double slab_logpdf(const Prior& prior, double mu) {
    if (const auto* pn = std::get_if<PointNormal>(&prior))
        return log_normal_pdf(mu, 0.0, pn->sigma2);
    if (const auto* pl = std::get_if<PointLaplace>(&prior))
        return -std::abs(mu) / pl->scale - std::log(2.0 * pl->scale);
    const auto& mx = std::get<NormalMixture>(prior);
    const double rest = 1.0 - mx.weights[0];
    if (rest <= 0.0) return kNegInf;
    double m = kNegInf;
    const int K1 = static_cast<int>(mx.weights.size());
    for (int k = 1; k < K1; ++k) {
        if (mx.weights[k] <= 0.0) continue;
        m = std::max(m, std::log(mx.weights[k] / rest) +
                            log_normal_pdf(mu, 0.0, mx.variances[k]));
    }
    if (!std::isfinite(m)) return kNegInf;
    double s = 0.0;
    for (int k = 1; k < K1; ++k) {
        if (mx.weights[k] <= 0.0) continue;
        s += std::exp(std::log(mx.weights[k] / rest) +
                      log_normal_pdf(mu, 0.0, mx.variances[k]) - m);
    }
    return m + std::log(s);
}

double slab_sd_max(const Prior& prior) {
    if (const auto* pn = std::get_if<PointNormal>(&prior)) return std::sqrt(pn->sigma2);
    if (const auto* pl = std::get_if<PointLaplace>(&prior)) return pl->scale * M_SQRT2;
    const auto& mx = std::get<NormalMixture>(prior);
    return std::sqrt(mx.variances[mx.variances.size() - 1]);
}

double slab_sd_min(const Prior& prior) {
    if (const auto* pn = std::get_if<PointNormal>(&prior)) return std::sqrt(pn->sigma2);
    if (const auto* pl = std::get_if<PointLaplace>(&prior)) return pl->scale;
    const auto& mx = std::get<NormalMixture>(prior);
    return std::sqrt(std::max(mx.variances[1], 1e-300));
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double m,
                        double b, double fa, double fm, double fb, double whole,
                        double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate_segment(const std::function<double(double)>& f, double a, double b,
                         double eps) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, eps, 48);
}

struct SlabIntegrals {
    double log_scale;        // M, the scaling of the exponent
    double i0, i1, i2, ilk;  // scaled integrals of 1, mu, mu^2, log-kernel
};

// Integrates exp(logN(z; mu, s2) + slab_logpdf(mu) - M) * {1, mu, mu^2,
// logN(z; mu, s2)} over a breakpoint partition anchored at the scale
// landmarks, so narrow peaks are never missed by the first subdivision.
SlabIntegrals slab_integrals(double z, const Prior& prior, double s2) {
    const double s = std::sqrt(s2);
    const double sd_max = slab_sd_max(prior);
    const double lo = std::min(0.0, z) - (20.0 * s + 40.0 * sd_max);
    const double hi = std::max(0.0, z) + (20.0 * s + 40.0 * sd_max);

    const auto lf = [&](double mu) {
        return log_normal_pdf(z, mu, s2) + slab_logpdf(prior, mu);
    };

    // coarse scan for the peak, refined by ternary search
    double mu_star = 0.0, best = kNegInf;
    const int n_scan = 4096;
    for (int i = 0; i <= n_scan; ++i) {
        const double mu = lo + (hi - lo) * i / n_scan;
        const double v = lf(mu);
        if (v > best) {
            best = v;
            mu_star = mu;
        }
    }
    {
        double a = mu_star - (hi - lo) / n_scan, b = mu_star + (hi - lo) / n_scan;
        for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(mu_star)); ++it) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (lf(m1) < lf(m2))
                a = m1;
            else
                b = m2;
        }
        mu_star = 0.5 * (a + b);
        best = std::max(best, lf(mu_star));
    }
    const double M = best;

    // breakpoints: geometric ladders around 0, z and the peak
    const double step0 = std::min({s, slab_sd_min(prior), std::abs(z) + 1.0}) * 0.25;
    std::vector<double> pts{lo, hi};
    for (double c : {0.0, z, mu_star}) {
        pts.push_back(c);
        for (double w = step0; w < (hi - lo); w *= 2.0) {
            pts.push_back(c - w);
            pts.push_back(c + w);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](double x) { return x < lo || x > hi; }),
              pts.end());

    SlabIntegrals out{M, 0.0, 0.0, 0.0, 0.0};
    const auto run = [&](const std::function<double(double)>& weight) {
        const auto f = [&](double mu) {
            const double l = lf(mu) - M;
            return l < -745.0 ? 0.0 : std::exp(l) * weight(mu);
        };
        double total = 0.0;
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            total += integrate_segment(f, pts[i], pts[i + 1], 1e-13);
        return total;
    };
    out.i0 = run([](double) { return 1.0; });
    out.i1 = run([](double mu) { return mu; });
    out.i2 = run([](double mu) { return mu * mu; });
    out.ilk = run([&](double mu) { return log_normal_pdf(z, mu, s2); });
    return out;
}

void check_inputs(double z, double s2) {
    if (!std::isfinite(z) || !(s2 > 0.0))
        throw NumericError("oracle: bad (z, s2) input");
}

struct Parts {
    double pi0;
    double log_spike;   // log(pi0 * N(z; 0, s2)), -inf if pi0 == 0
    double log_slab;    // log((1-pi0) * slab marginal), -inf if pi0 == 1
    double log_m;       // log marginal
    SlabIntegrals si;
};

Parts compute_parts(double z, const Prior& prior, double s2) {
    check_inputs(z, s2);
    Parts p;
    p.pi0 = spike_weight(prior);
    p.log_spike = p.pi0 > 0.0 ? std::log(p.pi0) + log_normal_pdf(z, 0.0, s2) : kNegInf;
    p.si = SlabIntegrals{kNegInf, 0, 0, 0, 0};
    p.log_slab = kNegInf;
    if (p.pi0 < 1.0) {
        p.si = slab_integrals(z, prior, s2);
        if (p.si.i0 > 0.0)
            p.log_slab = std::log1p(-p.pi0) + p.si.log_scale + std::log(p.si.i0);
    }
    p.log_m = logsumexp2(p.log_spike, p.log_slab);
    return p;
}

}  // namespace

double marginal_loglik(double z, const Prior& prior, double s2) {
    return compute_parts(z, prior, s2).log_m;
}

double posterior_mean(double z, const Prior& prior, double s2) {
    const Parts p = compute_parts(z, prior, s2);
    if (p.log_slab == kNegInf) return 0.0;
    const double scale = std::exp(std::log1p(-p.pi0) + p.si.log_scale - p.log_m);
    return scale * p.si.i1;
}

double posterior_variance(double z, const Prior& prior, double s2) {
    const Parts p = compute_parts(z, prior, s2);
    if (p.log_slab == kNegInf) return 0.0;
    const double scale = std::exp(std::log1p(-p.pi0) + p.si.log_scale - p.log_m);
    const double mean = scale * p.si.i1;
    return std::max(0.0, scale * p.si.i2 - mean * mean);
}

double posterior_expected_log_kernel(double z, const Prior& prior, double s2) {
    const Parts p = compute_parts(z, prior, s2);
    double acc = 0.0;
    if (p.log_spike != kNegInf)
        acc += std::exp(p.log_spike - p.log_m) * log_normal_pdf(z, 0.0, s2);
    if (p.log_slab != kNegInf) {
        const double scale = std::exp(std::log1p(-p.pi0) + p.si.log_scale - p.log_m);
        acc += scale * p.si.ilk;
    }
    return acc;
}

double kl_to_prior(double z, const Prior& prior, double s2) {
    return posterior_expected_log_kernel(z, prior, s2) - marginal_loglik(z, prior, s2);
}

}  // namespace ebglm::oracle
