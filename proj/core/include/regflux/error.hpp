#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regflux {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain arguments (non-finite values, empty samples, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Solver configuration that cannot be honoured (CFL too large, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A structural assumption on a flux or coefficient is violated.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// A fixed-point or quadrature iteration did not converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_ratio)
      : Error(what), last_ratio_(last_ratio) {}
  double last_ratio() const noexcept { return last_ratio_; }

 private:
  double last_ratio_;
};

/// NaN or Inf produced during time stepping.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A configured bound on fronts, events or interactions was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The operation is not implemented for the given flux convexity class.
class UnsupportedClass : public Error {
 public:
  using Error::Error;
};

/// Configuration document could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A member of an eps-sweep failed; carries the offending eps.
class SweepError : public Error {
 public:
  SweepError(const std::string& what, double eps) : Error(what), eps_(eps) {}
  double eps() const noexcept { return eps_; }

 private:
  double eps_;
};

}  // namespace regflux
