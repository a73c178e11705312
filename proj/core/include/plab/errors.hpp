#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace plab {

/// Base class for all pressure-lab errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed config, out-of-range parameter, violated precondition.
/// The message names the offending field or argument. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A requested computation would exceed a configured resource limit.
/// `config_key()` names the limit that fired (e.g. "word_budget").
/// CLI exit code 3.
class BudgetError : public Error {
 public:
  BudgetError(std::string config_key, const std::string& message)
      : Error(message), key_(std::move(config_key)) {}

  const std::string& config_key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace plab
