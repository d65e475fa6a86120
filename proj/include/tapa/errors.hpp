#pragma once

#include <stdexcept>
#include <string>

namespace tapa {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid parameter object or run configuration (bad dimension, bad split, ...).
struct ConfigError : Error {
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// A check was invoked outside the regime its statement requires.
/// The message names the violated condition, e.g. "theta0 < 1/10".
struct PreconditionError : Error {
  using Error::Error;
};

/// Too few samples for the requested statistic.
struct InsufficientDataError : Error {
  using Error::Error;
};

}  // namespace tapa
