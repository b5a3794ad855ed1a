#pragma once

#include <stdexcept>
#include <string>

namespace ptolemy {

// Domain errors: a well-formed request the mathematics refuses. The CLI maps
// these to exit code 1.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DimensionError : public DomainError {
 public:
  explicit DimensionError(const std::string& what) : DomainError("dimension", what) {}
};

class DivisionByZero : public DomainError {
 public:
  explicit DivisionByZero(const std::string& what) : DomainError("division-by-zero", what) {}
};

class NotDivisible : public DomainError {
 public:
  explicit NotDivisible(const std::string& what) : DomainError("not-divisible", what) {}
};

class EvaluationError : public DomainError {
 public:
  explicit EvaluationError(const std::string& what) : DomainError("evaluation", what) {}
};

class InvalidVertex : public DomainError {
 public:
  explicit InvalidVertex(const std::string& what) : DomainError("invalid-vertex", what) {}
};

class InvalidDiagonal : public DomainError {
 public:
  explicit InvalidDiagonal(const std::string& what) : DomainError("invalid-diagonal", what) {}
};

/// Raised when an exchange relation fails to divide exactly. By the Laurent
/// phenomenon this can only mean a bug in the arithmetic.
class LaurentViolation : public DomainError {
 public:
  explicit LaurentViolation(const std::string& what) : DomainError("laurent-violation", what) {}
};

class DegenerateSubspace : public DomainError {
 public:
  explicit DegenerateSubspace(const std::string& what) : DomainError("degenerate-subspace", what) {}
};

class GeometryError : public DomainError {
 public:
  explicit GeometryError(const std::string& what) : DomainError("geometry", what) {}
};

/// A computation refused because its operands outgrew configured limits.
class ResourceLimit : public DomainError {
 public:
  explicit ResourceLimit(const std::string& what) : DomainError("resource-limit", what) {}
};

class UnknownSession : public DomainError {
 public:
  explicit UnknownSession(const std::string& what) : DomainError("unknown-session", what) {}
};

// Malformed text or JSON input. The CLI maps this to exit code 2.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptolemy
