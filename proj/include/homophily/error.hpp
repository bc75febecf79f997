#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace homophily {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A statistic is undefined on the given input (zero variance, degenerate club, ...).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver gave up. Carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last)
      : Error(what), last_iterate(std::move(last)) {}
  std::vector<double> last_iterate;
};

}  // namespace homophily
