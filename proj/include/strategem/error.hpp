#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace strategem {

enum class ErrorCode {
  ParseError,
  UnknownService,
  UnknownCode,
  DuplicateCode,
  NoGenerator,
  InvalidLocation,
  InvalidState,
  RuleNotApplicable,
  UnknownRule,
  BudgetExceeded,
  LeftRecursion,
  NoStepAvailable,
  Stuck,
  NotApplicable,
  InvalidArgument,
};

/// Machine-readable spelling used on the wire, e.g. "rule-not-applicable".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an execution guard runs out of transitions. Carries the
/// rule trace of the path that was being explored when the budget ran out.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& message, std::vector<std::string> partial)
      : Error(ErrorCode::BudgetExceeded, message), partial_(std::move(partial)) {}

  const std::vector<std::string>& partial_trace() const noexcept { return partial_; }

 private:
  std::vector<std::string> partial_;
};

}  // namespace strategem
