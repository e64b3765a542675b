#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shiftdim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition on an argument does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The computation would exceed a configured guard (cells, DP states, nodes).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed. Carries a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
              ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace shiftdim
