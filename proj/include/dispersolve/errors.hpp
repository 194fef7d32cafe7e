#pragma once

#include <stdexcept>
#include <string>

namespace dispersolve {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value or empty sample region.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Tabulated symbol queried outside its table.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Data too coarse for the requested operation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A documented operation contract was violated (e.g. a multiplier that does
/// not preserve real-valuedness).
class ContractError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Configuration text rejected; the message names the key path and line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dispersolve
