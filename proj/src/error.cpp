#include "optswitch/error.hpp"

namespace optswitch {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnbalancedParenthesis: return "UnbalancedParenthesis";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::UnexpectedToken: return "UnexpectedToken";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::LogOfNonPositive: return "LogOfNonPositive";
    case ErrorCode::NonFiniteResult: return "NonFiniteResult";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::ExprError: return "ExprError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::BadStepCount: return "BadStepCount";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::DriftOutOfSet: return "DriftOutOfSet";
    case ErrorCode::ReflectionDiverged: return "ReflectionDiverged";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InstantaneousCycle: return "InstantaneousCycle";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
  }
  return "UnknownError";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::UnbalancedParenthesis:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::UnexpectedToken:
    case ErrorCode::FormatError:
    case ErrorCode::ExprError:
    case ErrorCode::RangeError:
    case ErrorCode::ValidationFailed:
      return ErrorCategory::Input;
    default:
      return ErrorCategory::Numeric;
  }
}

}  // namespace optswitch
