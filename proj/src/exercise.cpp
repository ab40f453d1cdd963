#include "strategem/exercise.hpp"

#include <algorithm>

#include "strategem/error.hpp"

namespace strategem {

RuleBook Exercise::rule_book() const {
  RuleBook book;
  for (const auto& r : strategy_rules) book.add(r);
  for (const auto& r : rule_set) book.add(r);
  for (const auto& r : buggy_rule_set) book.add(r);
  return book;
}

std::vector<RuleId> Exercise::rule_universe() const {
  std::vector<RuleId> out;
  for (const auto* rules : {&strategy_rules, &rule_set})
    for (const auto& r : *rules)
      if (std::find(out.begin(), out.end(), r.id) == out.end()) out.push_back(r.id);
  std::sort(out.begin(), out.end(), [&](const RuleId& a, const RuleId& b) { return rule_less(a, b); });
  return out;
}

bool Exercise::rule_less(const RuleId& a, const RuleId& b) const {
  auto rank = [&](const RuleId& r) {
    return static_cast<std::size_t>(std::find(ordering.begin(), ordering.end(), r) - ordering.begin());
  };
  auto ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

Exercise power_exercise() {
  Exercise ex;
  ex.code = "powerExercise";
  ex.strategy = write_as_power_of();
  ex.strategy_rules = {rule_add_exp(), rule_mul_exp(), rule_dist_exp()};
  ex.rule_set = {rule_reci_exp()};
  ex.buggy_rule_set = {rule_bug_add_exp()};
  ex.equivalence = eq_power;
  ex.similarity = sim_power;
  ex.is_suitable = suitable_power;
  ex.is_ready = ready_power;
  ex.generator = generate_power;
  ex.ordering = {kAddExp, kMulExp, kDistExp, kReciExp};
  return ex;
}

void Registry::add(Exercise ex) {
  if (exercises_.count(ex.code))
    throw Error(ErrorCode::DuplicateCode, "exercise '" + ex.code + "' is already registered");
  auto code = ex.code;
  exercises_.emplace(std::move(code), std::move(ex));
}

const Exercise& Registry::lookup(const std::string& code) const {
  auto it = exercises_.find(code);
  if (it == exercises_.end()) throw Error(ErrorCode::UnknownCode, "unknown exercise '" + code + "'");
  return it->second;
}

std::vector<std::string> Registry::codes() const {
  std::vector<std::string> out;
  for (const auto& [code, ex] : exercises_) out.push_back(code);
  return out;
}

Registry register_exercise(Registry reg, Exercise ex) {
  reg.add(std::move(ex));
  return reg;
}

const Exercise& lookup(const Registry& reg, const std::string& code) { return reg.lookup(code); }

const Registry& default_registry() {
  static const Registry reg = register_exercise(Registry{}, power_exercise());
  return reg;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

}  // namespace strategem
