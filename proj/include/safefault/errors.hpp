#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace safefault {

// Malformed or inconsistent user input (files, flags). CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax-level failure while reading a text format. Line/column are 1-based;
// 0 means "not tied to a position".
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             std::string identifier = {})
      : InputError(format(message, line, column)),
        line_(line),
        column_(column),
        identifier_(std::move(identifier)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& identifier() const { return identifier_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
  std::string identifier_;
};

// The tool caught itself contradicting its own proofs (e.g. a proven-safe
// fault detected by an admissible pattern). CLI exit code 2.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace safefault
