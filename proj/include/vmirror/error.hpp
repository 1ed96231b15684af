#pragma once

#include <stdexcept>
#include <string>

namespace vmirror {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, alias map or roster. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or structurally invalid input file.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A metric could not be computed for the given data ("no replies detected").
/// Pipeline callers turn it into a missing cell.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace vmirror
