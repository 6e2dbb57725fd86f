#pragma once

#include <stdexcept>
#include <string>

namespace blotto {

// Input that violates a documented precondition. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveValueError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveBudgetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The Lotto marginals cannot be coupled into a fixed-budget strategy.
class MixabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A numerical routine failed to deliver its contract. Maps to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoRootError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IterationCapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// File could not be read or written. Maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blotto
