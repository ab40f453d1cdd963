#pragma once

// Feedback services over the big-step semantics and an exercise record.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "strategem/exercise.hpp"
#include "strategem/semantics.hpp"

namespace strategem {

struct Diagnosis {
  enum class Kind { NotEq, Buggy, Similar, Expected, Detour, Correct };

  Kind kind = Kind::Correct;
  std::optional<RuleId> rule;  // set for Buggy, Expected and Detour

  friend bool operator==(const Diagnosis&, const Diagnosis&) = default;
};

std::string_view to_string(Diagnosis::Kind k);
std::string to_string(const Diagnosis& d);  // e.g. "Buggy (BugAddExp)"

struct DerivationStep {
  RuleId rule;
  Location location;
  State state;
  std::vector<RuleId> trace;  // minors and the major of this step
};

/// Initial state for an expression under the exercise strategy.
State start_state(const Exercise& ex, const Expr& e);

/// Big steps ordered by rule ordering, then focus path (shorter first), then
/// serialized state.
std::vector<BigStep> allfirsts(const Exercise& ex, const State& s, StepBudget& budget);
BigStep onefirst(const Exercise& ex, const State& s, StepBudget& budget);
std::vector<DerivationStep> derivation(const Exercise& ex, const State& s, StepBudget& budget);
bool ready(const Exercise& ex, const State& s);
std::size_t stepsremaining(const Exercise& ex, const State& s, StepBudget& budget);
State apply(const Exercise& ex, const RuleId& r, const Location& loc, const State& s);
std::vector<RuleId> applicable(const Exercise& ex, const Location& loc, const State& s);
State generate(const Registry& reg, const std::string& code, std::optional<Difficulty> difficulty,
               std::uint64_t seed);
Diagnosis diagnose(const Exercise& ex, const State& s, const Expr& submitted, StepBudget& budget);

/// Shortlex order on focus paths.
bool location_less(const Location& a, const Location& b);

}  // namespace strategem
