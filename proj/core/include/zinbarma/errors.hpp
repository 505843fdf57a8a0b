#pragma once

#include <stdexcept>
#include <string>

namespace zinb {

/// Invalid inputs: bad dimensions, malformed files, violated preconditions.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures: non-finite likelihoods, singular information matrices,
/// degenerate statistics.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zinb
