#pragma once

#include <stdexcept>
#include <string>

namespace exitwalk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid user configuration (bad preset, inconsistent interval, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed to reach its tolerance or diverged.
class NumericError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : NumericError(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace exitwalk
