#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecmnoise {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (R <= 0, negative current, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mismatched or empty grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Quadrature requested on a grid too coarse for the stated accuracy.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Requested range not covered (band outside spectrum, no crossover in grid).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Capacitance modulation too large for the linearized ECM model.
class SmallSignalError : public Error {
 public:
  using Error::Error;
};

/// Compensator targets that cannot be met.
class DesignError : public Error {
 public:
  using Error::Error;
};

/// Singular nodal matrix, usually a floating node.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Text input rejected; carries a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace ecmnoise
