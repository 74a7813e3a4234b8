#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualkern {

/// Bad argument or precondition violation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input point or dataset that does not conform to a skeleton's (n, d).
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature, linear solve or iteration that did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Skeleton DSL syntax or structure error. Line and column are 1-based;
/// column 0 means the whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace dualkern
