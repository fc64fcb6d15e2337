#pragma once

#include <stdexcept>
#include <string>

namespace adtrans {

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters do not satisfy the equalities of the requested regime.
class RegimeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical integration lost accuracy (norm drift, negative intensity, ...).
class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario file problem. The message carries the key path and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adtrans
