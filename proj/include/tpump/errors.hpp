#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tpump {

/// Raised when a computation cannot produce a trustworthy number
/// (norm drift, degenerate ground state, ...).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The spectrum touches E = 0 in a way the winding construction cannot resolve.
class CriticalityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Invalid user-facing configuration; carries the offending field path.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

} // namespace tpump
