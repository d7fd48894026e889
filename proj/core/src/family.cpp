#include "ebglm/family.hpp"

namespace ebglm {

Family family_from_name(const std::string& name, double dispersion) {
    if (name == "gaussian") {
        if (!(dispersion > 0.0))
            throw ConfigError("--family gaussian requires --dispersion <sigma^2> > 0");
        return Family::gaussian(dispersion);
    }
    if (name == "logistic" || name == "bernoulli") return Family::bernoulli();
    if (name == "poisson") return Family::poisson();
    throw ConfigError("unknown family '" + name +
                      "' (expected gaussian, logistic, or poisson)");
}

}  // namespace ebglm
