#pragma once

#include <stdexcept>
#include <string>

namespace optswitch {

/// Machine-readable error codes surfaced by the library and the CLI.
enum class ErrorCode {
  // expression parsing
  EmptyInput,
  UnbalancedParenthesis,
  UnknownIdentifier,
  UnexpectedToken,
  // expression evaluation
  DivisionByZero,
  LogOfNonPositive,
  NonFiniteResult,
  // problem files
  FormatError,
  ExprError,
  RangeError,
  ValidationFailed,
  // numerics
  BadStepCount,
  StepTooCoarse,
  DriftOutOfSet,
  ReflectionDiverged,
  NoConvergence,
  InstantaneousCycle,
  SearchSpaceTooLarge,
};

const char* error_code_name(ErrorCode code);

/// Category used by the CLI to pick an exit status.
enum class ErrorCategory { Input, Numeric };

ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(std::move(message)) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace optswitch
