#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace absa {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a documented invariant (bad offsets, bad schema,
// inconsistent predictions). Maps to exit code 1 in the CLI.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed delimited input. `row` is the 1-based data row (header excluded).
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : ValidationError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Caller passed an argument outside the operation's domain (k = 0, epochs = 0,
// fraction outside (0,1), ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Receives recoverable diagnostics (skipped rows, alignment fixes, ...).
// An empty sink discards them.
using WarningSink = std::function<void(const std::string&)>;

inline void emit(const WarningSink& sink, const std::string& message) {
  if (sink) sink(message);
}

}  // namespace absa
