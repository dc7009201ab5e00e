#pragma once

#include <stdexcept>
#include <string>

namespace hallmhd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Array sizes or grids do not match.
struct ShapeError : Error {
  using Error::Error;
};

/// Operator applied outside its domain (e.g. negative-order multiplier on a
/// field with a mean mode).
struct DomainError : Error {
  using Error::Error;
};

struct ArgumentError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

/// Non-finite values; the message names the offending term.
struct NumericError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

/// Step rejected by the explicit stability guard.
struct CflError : Error {
  CflError(const std::string& what, double required_dt)
      : Error(what), required_dt(required_dt) {}
  double required_dt;
};

}  // namespace hallmhd
