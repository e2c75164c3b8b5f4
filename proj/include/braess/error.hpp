#pragma once

#include <stdexcept>
#include <string>

namespace braess {

// Every failure raised by the library derives from Error so callers can map
// categories onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Flow beyond a road's free-phase capacity q(1).
class CapacityExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Structurally invalid input: malformed network, partition off the simplex.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column, const std::string& source = {})
      : Error((source.empty() ? "" : source + ":") + std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace braess
