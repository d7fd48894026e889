#pragma once

#include <iosfwd>
#include <string>

namespace ebglm {

// On-demand numerical certification: re-runs the quadrature,
// finite-difference and roundtrip oracles against the closed-form
// implementations and prints one PASS/FAIL line per check. Suites:
//   bnm       marginal likelihood vs quadrature, inverse-map roundtrip,
//             shrinkage monotonicity, point-Laplace stability
//   penalty   pure-normal closed form, symmetry, envelope derivative
//   gradient  objective gradient vs central differences, all families x priors
//   all       everything above
// Returns true when every check passes.
bool run_verify_suite(const std::string& suite, std::ostream& out);

}  // namespace ebglm
