#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbmruin {

// Bad input: maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that could not be completed: maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Normalized premium rates coincide, so the barrier lines never cross.
class ParallelLinesError : public ValidationError {
 public:
  ParallelLinesError()
      : ValidationError("parallel-lines: normalized premium rates are equal, crossing time t* is undefined") {}
};

// A formula needs a constant the caller did not supply.
class ConstantRequiredError : public ValidationError {
 public:
  explicit ConstantRequiredError(const std::string& which)
      : ValidationError("constant required: " + which) {}
};

// Regime where only the logarithmic joint-ruin rate is available.
class OnlyLogRateError : public ValidationError {
 public:
  OnlyLogRateError()
      : ValidationError("only logarithmic rate available in this regime; use log_rate_and") {}
};

class NonIntegrableError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class FactorizationError : public NumericalError {
 public:
  explicit FactorizationError(std::size_t pivot)
      : NumericalError("covariance matrix not numerically positive definite at pivot " +
                       std::to_string(pivot)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace fbmruin
