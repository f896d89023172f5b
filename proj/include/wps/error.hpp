#pragma once

#include <stdexcept>
#include <string>

namespace wps {

/// Error classes map onto the CLI exit codes: malformed input (1),
/// violated mathematical precondition (2), exhausted budget (3).
enum class ErrorKind { kMalformed = 1, kPrecondition = 2, kBudget = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::kMalformed, "parse error: " + what) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorKind::kMalformed, "schema error: " + what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::kPrecondition, what) {}
};

class RingMismatch : public PreconditionError {
 public:
  explicit RingMismatch(const std::string& where) : PreconditionError("ring mismatch in " + where) {}
};

class InhomogeneousRelation : public PreconditionError {
 public:
  InhomogeneousRelation(std::size_t column, std::string entry)
      : PreconditionError("inhomogeneous relation column " + std::to_string(column) + " at entry " + entry),
        column_(column),
        entry_(std::move(entry)) {}
  std::size_t column() const noexcept { return column_; }
  const std::string& entry() const noexcept { return entry_; }

 private:
  std::size_t column_;
  std::string entry_;
};

class DegreeTooSmall : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(ErrorKind::kBudget, what) {}
};

class StabilizationBudgetExceeded : public BudgetError {
 public:
  using BudgetError::BudgetError;
};

class WindowTooSmall : public BudgetError {
 public:
  using BudgetError::BudgetError;
};

// Raised only if the engine produces syzygies past the Hilbert bound.
class ResolutionTooLong : public BudgetError {
 public:
  using BudgetError::BudgetError;
};

}  // namespace wps
