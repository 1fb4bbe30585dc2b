#pragma once

#include <stdexcept>
#include <string>

namespace mfnls {

// Bad or inconsistent user-facing parameters (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was violated by the caller.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but annihilated by the operation (zero after
// symmetrization, cutoff removes all spectral weight, ...).
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Discretization cannot represent the requested object (mass leaving the
// box, mollifier narrower than the grid, ...).
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runtime numerical failure: norm drift, collapse ceiling, quadrature
// non-convergence (maps to CLI exit code 3).
struct NumericalAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mfnls
