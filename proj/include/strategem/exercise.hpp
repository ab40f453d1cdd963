#pragma once

// Exercise records and the registry that maps codes to them.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strategem/expr.hpp"
#include "strategem/powers.hpp"
#include "strategem/semantics.hpp"
#include "strategem/strategy.hpp"

namespace strategem {

struct Exercise {
  std::string code;
  Strategy strategy = fail();
  std::vector<RewriteRule> rule_set;        // extra rules, recognized as detours
  std::vector<RewriteRule> buggy_rule_set;
  std::vector<RewriteRule> strategy_rules;  // rules the strategy refers to
  std::function<bool(const Expr&, const Expr&)> equivalence;
  std::function<bool(const Expr&, const Expr&)> similarity;
  std::function<bool(const Expr&)> is_suitable;
  std::function<bool(const Expr&)> is_ready;
  std::function<Expr(Difficulty, std::uint64_t)> generator;  // empty if none
  std::vector<RuleId> ordering;                             // ascending

  /// Strategy rules plus rule set plus buggy rules, with the built-in minors.
  RuleBook rule_book() const;

  /// Strategy rules and rule set; buggy rules are never part of it.
  std::vector<RuleId> rule_universe() const;

  /// Position in the ordering; rules missing from it sort after all listed
  /// ones, by name.
  bool rule_less(const RuleId& a, const RuleId& b) const;
};

Exercise power_exercise();

class Registry {
 public:
  /// Throws Error(DuplicateCode).
  void add(Exercise ex);
  /// Throws Error(UnknownCode).
  const Exercise& lookup(const std::string& code) const;
  std::vector<std::string> codes() const;

 private:
  std::map<std::string, Exercise> exercises_;
};

Registry register_exercise(Registry reg, Exercise ex);
const Exercise& lookup(const Registry& reg, const std::string& code);

/// Registry holding every shipped exercise.
const Registry& default_registry();

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string witness;  // first counterexample, empty on success
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
};

/// Samples generated instances and checks the exercise requirements: lint,
/// ready final states, rule soundness, generator contract, onefirst minimality.
ValidationReport validate(const Exercise& ex, std::size_t samples, std::uint64_t seed);

}  // namespace strategem
