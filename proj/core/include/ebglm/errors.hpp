#pragma once

#include <stdexcept>
#include <string>

namespace ebglm {

// Bad user input: malformed files, unsupported flag combinations, data that
// violates a model precondition. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure with no usable result (degenerate prior in the inverse
// map, optimizer stall without a point). The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ebglm
