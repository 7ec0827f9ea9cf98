#pragma once

#include <stdexcept>
#include <string>

namespace ionwell {

// Bad or inconsistent user input (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

// Solver failure: NaN, undersampled grid, no convergence (CLI exit code 3).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace ionwell
