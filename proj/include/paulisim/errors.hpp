#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paulisim {

// Precondition violations on arguments: qubit indices, parameter ranges, sizes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Kraus set fails completeness, or a transfer matrix is not trace preserving.
class InvalidChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPovm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense or Pauli-basis state that is not a valid density matrix / normalized vector.
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Selective measurement asked for an outcome of (numerically) zero probability.
class ImpossibleOutcome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDimension : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace paulisim
