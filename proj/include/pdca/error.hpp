#pragma once

#include <stdexcept>
#include <string>

namespace pdca {

/// Bad input: malformed files, violated preconditions, unknown config keys.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Combinatorial sizes that do not fit the platform integer.
class SizeError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Power-sum weights could not be computed to the required residual.
class DecompositionError : public NumericalError {
 public:
  DecompositionError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Dykstra alternation hit its sweep cap.
class ProjectionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pdca
