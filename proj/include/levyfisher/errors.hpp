#pragma once

#include <stdexcept>
#include <string>

namespace levyfisher {

// Numerical failures map to CLI exit code 2, configuration problems to 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Raised where a quantity is infinite or undefined at the boundary of the
// parameter space, e.g. the index information at beta = 2.
class UndefinedAtBoundary : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergentIntegral : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class HypothesisViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MomentUndefined : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OptimizationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace levyfisher
