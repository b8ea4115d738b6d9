#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pseudoherm {

enum class ErrorKind {
  UnboundSymbol,
  DivisionByZero,
  DegreeCapExceeded,
  CutoffViolated,
  NonHermitianInput,
  NoSolution,
  DegreeBoundTooSmall,
  OrderExceedsKnownQ,
  UnsupportedFamily,
  ConvergenceFailure,
  DimensionMismatch,
  UntrustedLevel,
  StepSizeTooLarge,
  PreconditionViolation,
  UsageError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers (the CLI in
/// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnboundSymbol: return "UnboundSymbol";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorKind::CutoffViolated: return "CutoffViolated";
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::DegreeBoundTooSmall: return "DegreeBoundTooSmall";
    case ErrorKind::OrderExceedsKnownQ: return "OrderExceedsKnownQ";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UntrustedLevel: return "UntrustedLevel";
    case ErrorKind::StepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pseudoherm
