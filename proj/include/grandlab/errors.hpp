#pragma once

#include <stdexcept>
#include <string>

namespace grandlab {

/// Base of every numerical failure raised by the library. The CLI maps these
/// to exit code 3; UsageError maps to exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInterval : NumericalError {
  using NumericalError::NumericalError;
};

struct NonConvergent : NumericalError {
  using NumericalError::NumericalError;
};

struct DivergentIntegral : NumericalError {
  using NumericalError::NumericalError;
};

struct DivergentNorm : NumericalError {
  using NumericalError::NumericalError;
};

struct DomainError : NumericalError {
  using NumericalError::NumericalError;
};

/// Malformed input: DSL terms, parameter domains, CLI flags.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace grandlab
