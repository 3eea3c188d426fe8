#pragma once

#include <stdexcept>
#include <string>

namespace fga {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A potential produced NaN, infinity, or a value above the overflow guard.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

/// Iterative solver ran out of budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Ground state or gap is degenerate where a nondegenerate one is required.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// Derived parameters overflow the floating-point guard; scaled mode is required.
class ParameterOverflow : public Error {
 public:
  using Error::Error;
};

/// Time evolution lost unitarity beyond the allowed drift.
class NormDrift : public Error {
 public:
  NormDrift(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Configuration file problem (malformed, unknown key, wrong type).
class ConfigError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_invalid(const std::string& what);

}  // namespace fga
