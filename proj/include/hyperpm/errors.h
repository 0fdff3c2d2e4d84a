#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperpm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ReferenceError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Oracle or verifier refused an instance that exceeds its configured scale.
class ScaleGuardError : public Error {
 public:
  using Error::Error;
};

// A generator could not satisfy its parameters within its retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// A documented precondition was broken by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hyperpm
