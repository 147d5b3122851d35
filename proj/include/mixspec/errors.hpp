#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mixspec {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid model or configuration parameters.
struct ParameterError : Error {
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. Im z <= 0).
struct DomainError : Error {
  using Error::Error;
};

/// Not enough samples for the requested computation.
struct InsufficientDataError : Error {
  using Error::Error;
};

/// Model/operation combination without the required closed form.
struct UnsupportedModelError : Error {
  using Error::Error;
};

/// Covariance matrix not positive semi-definite beyond regularization.
struct CovarianceError : Error {
  using Error::Error;
};

/// Invalid block scheme geometry.
struct SchemeError : Error {
  using Error::Error;
};

/// Matrix with unexpected shape or symmetry defect.
struct ShapeError : Error {
  using Error::Error;
};

/// Fixed-point solver failed to converge; carries the tail of the residual history.
struct SolverError : Error {
  std::vector<double> residual_trace;
  SolverError(const std::string& msg, std::vector<double> trace)
      : Error(msg), residual_trace(std::move(trace)) {}
};

}  // namespace mixspec
