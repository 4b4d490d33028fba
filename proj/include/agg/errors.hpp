#ifndef AGG_ERRORS_HPP
#define AGG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace agg {

/// Base class of all tolerance/convergence failures (as opposed to
/// input-validation errors, which use the std::logic_error family).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureError : NumericalError {
  using NumericalError::NumericalError;
};

/// An integral diverges (singular frequency, inadmissible density, ...).
struct DivergenceError : NumericalError {
  using NumericalError::NumericalError;
};

/// A series or transformation pipeline failed to converge.
struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

/// A regression-based estimate did not fit well enough to be trusted.
struct InconclusiveError : NumericalError {
  using NumericalError::NumericalError;
};

/// Density support violates a construction hypothesis.
struct SupportError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Rejection sampler exceeded its proposal budget.
struct SamplingError : NumericalError {
  using NumericalError::NumericalError;
};

/// Grid-doubling check detected aliasing in a spectral factorization.
struct AliasingError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace agg

#endif
