#pragma once

#include <stdexcept>
#include <string>

namespace hdich {

/// Base type for every failure raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of the operation.
struct DomainError : Error { using Error::Error; };

/// Iterative solver exhausted its bracket or iteration budget.
struct ConvergenceError : Error { using Error::Error; };

/// A matrix that must be inverted is numerically singular.
struct SingularMatrixError : Error { using Error::Error; };

/// Non-finite values or a failed dense linear-algebra kernel.
struct NumericalError : Error { using Error::Error; };

/// The ODE propagator produced non-finite state or an unusable span.
struct IntegrationError : Error { using Error::Error; };

/// Projection rank is not constant along the time axis.
struct RankError : Error { using Error::Error; };

/// No grid point satisfies the applicability restriction of the estimate.
struct EmptyRegionError : Error { using Error::Error; };

/// No singular-value gap at the requested threshold; no splitting detectable.
struct NoGapError : Error { using Error::Error; };

/// Propagated quantities exceeded the conditioning budget.
struct ConditioningError : Error { using Error::Error; };

/// Scalar parameter outside its admissible range.
struct RangeError : Error { using Error::Error; };

/// Malformed run configuration.
struct ConfigError : Error { using Error::Error; };

}  // namespace hdich
