#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace csfs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (bad fraction, k out of range, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or violates a dataset invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number of the offending line.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A label value outside {-1, +1} (or {0, 1} before remapping).
class LabelDomainError : public DataError {
 public:
  using DataError::DataError;
};

/// Matrix dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An F-measure whose denominator is not strictly positive.
class UndefinedMeasureError : public Error {
 public:
  using Error::Error;
};

/// Singular systems, non-finite objectives and similar numerical failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The iterative solver produced a non-finite objective. The per-iteration
/// trace up to the failure is kept for diagnosis.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::vector<double> trace)
      : NumericalError(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace csfs
