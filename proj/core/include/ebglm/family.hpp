#pragma once

#include <string>

#include "ebglm/errors.hpp"
#include "ebglm/special.hpp"

namespace ebglm {

enum class FamilyKind { gaussian, bernoulli, poisson };

// Exponential-family likelihood in canonical form,
//   p(y | eta) = exp((y*eta - b(eta)) / a(phi) + c(y, phi)),
// restricted to the three canonical-link members used by the solver.
// The additive constant c(y, phi) is dropped throughout.
struct Family {
    FamilyKind kind = FamilyKind::gaussian;
    double dispersion = 1.0;  // a(phi); sigma^2 for gaussian, 1 otherwise

    static Family gaussian(double sigma2) {
        if (!(sigma2 > 0.0))
            throw ConfigError("gaussian dispersion (sigma^2) must be > 0");
        return Family{FamilyKind::gaussian, sigma2};
    }
    static Family bernoulli() { return Family{FamilyKind::bernoulli, 1.0}; }
    static Family poisson() { return Family{FamilyKind::poisson, 1.0}; }

    // b(eta)
    double cumulant(double eta) const {
        switch (kind) {
            case FamilyKind::gaussian: return 0.5 * eta * eta;
            case FamilyKind::bernoulli: return log1pexp(eta);
            case FamilyKind::poisson: return std::exp(eta);
        }
        return 0.0;
    }

    // b'(eta), the mean function
    double cumulant_d1(double eta) const {
        switch (kind) {
            case FamilyKind::gaussian: return eta;
            case FamilyKind::bernoulli: return sigmoid(eta);
            case FamilyKind::poisson: return std::exp(eta);
        }
        return 0.0;
    }

    // b''(eta), the variance function; strictly positive for finite eta
    // (may underflow to 0 for bernoulli at |eta| large).
    double cumulant_d2(double eta) const {
        switch (kind) {
            case FamilyKind::gaussian: return 1.0;
            case FamilyKind::bernoulli: {
                const double p = sigmoid(eta);
                return p * (1.0 - p);
            }
            case FamilyKind::poisson: return std::exp(eta);
        }
        return 0.0;
    }

    // l(eta) = (y*eta - b(eta)) / a(phi), excluding c(y, phi).
    double log_lik_term(double y, double eta) const {
        check_support(y);
        return (y * eta - cumulant(eta)) / dispersion;
    }

    bool in_support(double y) const {
        switch (kind) {
            case FamilyKind::gaussian: return std::isfinite(y);
            case FamilyKind::bernoulli: return y == 0.0 || y == 1.0;
            case FamilyKind::poisson:
                return y >= 0.0 && std::isfinite(y) && y == std::floor(y);
        }
        return false;
    }

    void check_support(double y) const {
        if (!in_support(y))
            throw ConfigError("response value " + std::to_string(y) +
                              " outside the support of family '" + name() + "'");
    }

    const char* name() const {
        switch (kind) {
            case FamilyKind::gaussian: return "gaussian";
            case FamilyKind::bernoulli: return "logistic";
            case FamilyKind::poisson: return "poisson";
        }
        return "?";
    }
};

Family family_from_name(const std::string& name, double dispersion);

}  // namespace ebglm
