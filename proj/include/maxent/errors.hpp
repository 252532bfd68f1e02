#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxent {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A table (or one of its categories) has an empty exposure or outcome margin.
class DegenerateTableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Tjur R^2 on a sample with a single observed class.
class UndefinedStatisticError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Invalid configuration or solver parameter.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the 1-based line number (0 if not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input whose values are not acceptable (negative counts, bad labels).
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxent
