#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ebglm {

// Deterministic random source: mt19937_64 (whose sequence is fixed by the
// standard) with hand-rolled output transforms, so that streams do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // standard normal via the Marsaglia polar method (uses only sqrt/log)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, q;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double f = std::sqrt(-2.0 * std::log(q) / q);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // standard Laplace (scale 1) by inverse CDF
    double laplace() {
        const double u = uniform() - 0.5;
        return u >= 0.0 ? -std::log(1.0 - 2.0 * u) : std::log(1.0 + 2.0 * u);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // exact Poisson sampling: sequential inversion below 10, Hormann's
    // PTRS transformed rejection above
    long poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda < 10.0) {
            const double target = std::exp(-lambda);
            long k = 0;
            double prod = uniform();
            while (prod > target) {
                ++k;
                prod *= uniform();
            }
            return k;
        }
        const double slam = std::sqrt(lambda);
        const double loglam = std::log(lambda);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform() - 0.5;
            double v = uniform();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * invalpha / (a / (us * us) + b)) <=
                kf * loglam - lambda - std::lgamma(kf + 1.0))
                return static_cast<long>(kf);
        }
    }

    // splitmix64 step, used to derive independent substream seeds
    static std::uint64_t mix(std::uint64_t state, std::uint64_t salt) {
        std::uint64_t z = state + 0x9e3779b97f4a7c15ULL * (salt + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ebglm
