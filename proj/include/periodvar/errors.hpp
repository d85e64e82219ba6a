#pragma once

#include <stdexcept>
#include <string>

namespace periodvar {

// Bad input: out-of-range indices, mismatched dimensions, malformed files.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Valid input outside the supported domain (e.g. point at infinity, genus != 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Base class for failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PrecisionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PathError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BasisTrackingError : public NumericalError {
 public:
  BasisTrackingError(const std::string& what, double offending_t)
      : NumericalError(what), t_(offending_t) {}
  double offending_t() const { return t_; }

 private:
  double t_;
};

// A diagnostic computation (extrapolation, limit) did not converge.
class DiagnosticFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace periodvar
