#pragma once

#include <stdexcept>
#include <string>

namespace moran {

/// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument to an operation (bad K/N, out-of-range state, ...).
struct argument_error : error {
  using error::error;
};

/// Input matrix or measure failed validation (negative rate, reducible, ...).
struct validation_error : error {
  using error::error;
};

/// Problem size exceeds a configured capacity limit.
struct capacity_error : error {
  using error::error;
};

/// Requested method does not apply to the given model.
struct unsupported_error : error {
  using error::error;
};

/// Numerical failure (singular solve, eigensolver non-convergence, ...).
struct numeric_error : error {
  using error::error;
};

}  // namespace moran
