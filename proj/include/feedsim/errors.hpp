#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace feedsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or inputs that contradict the run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or does not parse.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates a domain constraint (e.g. thermometer > 100).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Generation or scoring backend failed after its retry budget.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Log, manifest or state failed an integrity check.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& what, std::optional<std::int64_t> step = std::nullopt)
      : Error(step ? "step " + std::to_string(*step) + ": " + what : what), step_(step) {}

  std::optional<std::int64_t> step() const { return step_; }

 private:
  std::optional<std::int64_t> step_;
};

}  // namespace feedsim
