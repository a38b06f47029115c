#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace locapprox {

/// Failure categories raised by the library. Each value names one
/// precondition or domain condition; callers switch on `Error::kind()`.
enum class ErrorKind {
  ValueTooSmall,
  CompositeInFieldMode,
  ModulusMismatch,
  NonUnit,
  DimensionMismatch,
  SingularPivot,
  NotADivisor,
  RangeExhausted,
  Overflow,
  DenominatorNotUnit,
  ScaleTooLargeForModulus,
  NotLocal,
  OverflowAtRequestedLevel,
  EnumerationBudgetExceeded,
  HeightExceeded,
  DegenerateParams,
  WindowTooSmall,
  EmptyPointSet,
  Unsupported,
  ParseError,
  UnboundVariable,
  TermEscapesSorts,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ValueTooSmall: return "ValueTooSmall";
    case ErrorKind::CompositeInFieldMode: return "CompositeInFieldMode";
    case ErrorKind::ModulusMismatch: return "ModulusMismatch";
    case ErrorKind::NonUnit: return "NonUnit";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularPivot: return "SingularPivot";
    case ErrorKind::NotADivisor: return "NotADivisor";
    case ErrorKind::RangeExhausted: return "RangeExhausted";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DenominatorNotUnit: return "DenominatorNotUnit";
    case ErrorKind::ScaleTooLargeForModulus: return "ScaleTooLargeForModulus";
    case ErrorKind::NotLocal: return "NotLocal";
    case ErrorKind::OverflowAtRequestedLevel: return "OverflowAtRequestedLevel";
    case ErrorKind::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorKind::HeightExceeded: return "HeightExceeded";
    case ErrorKind::DegenerateParams: return "DegenerateParams";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::EmptyPointSet: return "EmptyPointSet";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TermEscapesSorts: return "TermEscapesSorts";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace locapprox
