#pragma once

#include <stdexcept>
#include <string>

namespace grwalk {

/// Caller violated a precondition (bad arguments, mismatched families).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mathematically undefined request, e.g. inverting zero.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures of finite-precision numerics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p-adic digits needed by an operation were lost or never available.
class PrecisionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A cell discretisation is too coarse for the requested operator.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Mass moved outside the valuation window under the strict policy.
class WindowOverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Should be unreachable for valid inputs.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace grwalk
