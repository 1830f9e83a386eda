#pragma once

#include <stdexcept>
#include <string>

namespace stet {

// Invalid parameters or an inconsistent run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unreadable or malformed input data (files, signals).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation produced non-finite or otherwise unusable results.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stet
