/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by all gmap4 modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace gmap4 {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Syntax or semantic error in a surface file or expression.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, int line, int column)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                   message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Arithmetic left the domain of a function (division by zero, sqrt of a
/// non-positive value).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Expression evaluation failed; carries the offending subexpression.
class EvalError : public Error {
 public:
  EvalError(const std::string& message, std::string subexpression)
      : Error(message + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Iterative or stepping procedure failed (Newton divergence, characteristic
/// point, stencil outside the domain).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two independent formulas for the same invariant disagreed. Signals a bug,
/// not bad input.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmap4
