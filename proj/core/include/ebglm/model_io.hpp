#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ebglm/dataset.hpp"
#include "ebglm/family.hpp"
#include "ebglm/prior.hpp"
#include "ebglm/solver.hpp"

namespace ebglm {

struct ModelCoefficient {
    std::string name;
    double theta = 0.0;         // original scale
    double posterior_sd = 0.0;  // original scale
    double nonzero_prob = 1.0;
    double z = 0.0;   // fit-space pseudo-observation
    double s2 = 0.0;  // fit-space normal-means variance
};

// Everything needed to reload a fitted model: stable on-disk schema,
// serialized as a JSON document with doubles printed at 17 significant
// digits so the round-trip is bit-faithful in binary64.
struct ModelDocument {
    int format_version = 0;
    std::string family;  // gaussian | logistic | poisson
    double dispersion = 1.0;
    Prior prior;
    bool has_intercept = true;
    std::optional<Standardization> standardization;
    std::string response_name = "y";
    std::vector<ModelCoefficient> coefficients;
    // training metadata
    int n = 0, p = 0;
    double objective_final = 0.0;
    double elbo = 0.0;
    bool converged = false, stalled = false;
    int outer_iters = 0, inner_iters = 0;
    std::uint64_t seed = 0;
};

ModelDocument to_document(const FitResult& fit, int n_train);

// Reconstructs the slice of FitResult that predict() needs.
FitResult from_document(const ModelDocument& doc);

void save_model(const ModelDocument& doc, const std::string& path);
ModelDocument load_model(const std::string& path);

}  // namespace ebglm
