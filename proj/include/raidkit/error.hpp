#pragma once

#include <stdexcept>
#include <string>

namespace raidkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on shapes, ranks or parameters was not met by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its cap, or the input is numerically degenerate.
/// Carries the best estimate reached and a residual for diagnostics.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double best_estimate = 0.0, double residual = 0.0)
      : Error(what), best_estimate_(best_estimate), residual_(residual) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

/// Malformed or missing input files.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace raidkit
