#pragma once

#include <stdexcept>
#include <string>

namespace siv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (unknown element, bad geometry, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs that are individually valid but jointly inconsistent.
/// Carries the offending value so callers can still report it.
class InconsistentInputsError : public Error {
 public:
  InconsistentInputsError(const std::string& what, double value)
      : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Planning target cannot be reached (e.g. zero activation yield).
class InfeasibleTargetError : public Error {
 public:
  using Error::Error;
};

/// Ratio requested with a zero denominator.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

/// Normal equations are singular at the solution.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// No reference level to normalize by (histogram plateau, direct-spot density).
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Detection threshold cannot be derived from the map.
class ThresholdUndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace siv
