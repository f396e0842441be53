#pragma once

#include <stdexcept>
#include <string>

namespace defectbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating input data (CSV files, matrices, labels).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to an operation (bad hyperparameter, k out of range, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration schema violation. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace defectbench
