#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace ebglm {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

// log(1 + exp(x)) without overflow. The naive form overflows for x > ~709
// and loses all precision past ~36.
inline double log1pexp(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Numerically stable logistic function.
inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log N(x; mu, v) for v > 0.
inline double log_normal_pdf(double x, double mu, double v) {
    const double d = x - mu;
    return -0.5 * (d * d / v + std::log(v) + kLog2Pi);
}

// log(exp(a) + exp(b)), tolerating -inf arguments.
inline double logsumexp2(double a, double b) {
    if (a < b) std::swap(a, b);
    if (a == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

// log sum_k exp(x_k) over a span, tolerating -inf entries.
inline double logsumexp(std::span<const double> xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// Scaled complementary error function exp(t^2) erfc(t).
//
// For t in [0, 20] the direct product is fine (erfc does not go denormal
// until t ~ 26.2). Past that, the asymptotic expansion
//   erfcx(t) = 1/(t sqrt(pi)) * (1 - 1/(2t^2) + 3/(4t^4) - ...)
// converges to double precision in a handful of terms.
// Negative arguments grow like 2 exp(t^2) and overflow past t ~ -26.6;
// callers that need that regime must stay in log space (see bnm.cpp).
inline double erfcx(double t) {
    if (t < 0.0) {
        // erfcx(t) = 2 exp(t^2) - erfcx(-t)
        const double t2 = t * t;
        if (t2 > 700.0) return std::numeric_limits<double>::infinity();
        return 2.0 * std::exp(t2) - erfcx(-t);
    }
    if (t <= 20.0) return std::exp(t * t) * std::erfc(t);
    const double inv2t2 = 1.0 / (2.0 * t * t);
    double term = 1.0, sum = 1.0;
    for (int n = 1; n <= 12; ++n) {
        term *= -static_cast<double>(2 * n - 1) * inv2t2;
        sum += term;
        if (std::abs(term) < 1e-17 * sum) break;
    }
    return sum / (t * 1.7724538509055160272981674833411452);  // t*sqrt(pi)
}

// log(erfc(t)) on the whole real line; uses erfcx where erfc underflows.
inline double log_erfc(double t) {
    if (t > 8.0) return -t * t + std::log(erfcx(t));
    return std::log(std::erfc(t));
}

}  // namespace ebglm
