#pragma once

#include <stdexcept>
#include <string>

namespace homog {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition does not hold (non-positive coefficient,
/// window outside the domain, dt too large, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A numerical procedure could not produce a result (singular system,
/// degenerate fit, unsupported function class for an operation).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Malformed or schema-invalid configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace homog
