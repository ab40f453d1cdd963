#include "strategem/error.hpp"

namespace strategem {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::UnknownService: return "unknown-service";
    case ErrorCode::UnknownCode: return "unknown-code";
    case ErrorCode::DuplicateCode: return "duplicate-code";
    case ErrorCode::NoGenerator: return "no-generator";
    case ErrorCode::InvalidLocation: return "invalid-location";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::RuleNotApplicable: return "rule-not-applicable";
    case ErrorCode::UnknownRule: return "unknown-rule";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::LeftRecursion: return "left-recursion";
    case ErrorCode::NoStepAvailable: return "no-step-available";
    case ErrorCode::Stuck: return "stuck";
    case ErrorCode::NotApplicable: return "not-applicable";
    case ErrorCode::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace strategem
