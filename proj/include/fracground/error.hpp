#pragma once

#include <stdexcept>
#include <string>

namespace fracground {

enum class ErrorKind {
  invalid_field,
  parameter,
  shape,
  constants_undefined,
  accuracy,
  oracle_too_large,
  not_applicable,
  degenerate_direction,
  no_root,
  degenerate_model,
  overflow,
  hypothesis,
  config,
  io,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception; `kind()` lets callers map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Quadrature failed to reach the requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : Error(ErrorKind::accuracy, what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// A configuration key is missing, mistyped, unknown or out of range.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(ErrorKind::config, key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace fracground
