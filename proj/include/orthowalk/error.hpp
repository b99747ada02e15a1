#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthowalk {

enum class ErrorCode {
  ZeroStep,
  SpanViolation,
  NonPositivePoint,
  NoConvergence,
  OrthantNotContained,
  Degenerate,
  DegenerateStepset,
  Divergent,
  AttemptsExhausted,
  UnknownAtom,
  BudgetExceeded,
  ImpossibleEndpoint,
  UnknownFormat,
  DegenerateHull,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Base of every error the library raises. The code is machine readable and
// is what the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace orthowalk
