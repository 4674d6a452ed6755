#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eabr {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid input file content. `row()` is the 1-based physical
// line number in the source text, or 0 when the error is not tied to a row.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Constraint violation on an already-constructed value.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Curve fitting could not produce parameters.
class FitError : public Error {
 public:
  enum class Kind { kTooFewPoints, kUnidentifiable, kDivergence };

  FitError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace eabr
