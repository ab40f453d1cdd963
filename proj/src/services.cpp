#include "strategem/services.hpp"

#include <algorithm>

#include "strategem/error.hpp"

namespace strategem {

std::string_view to_string(Diagnosis::Kind k) {
  switch (k) {
    case Diagnosis::Kind::NotEq: return "NotEq";
    case Diagnosis::Kind::Buggy: return "Buggy";
    case Diagnosis::Kind::Similar: return "Similar";
    case Diagnosis::Kind::Expected: return "Expected";
    case Diagnosis::Kind::Detour: return "Detour";
    case Diagnosis::Kind::Correct: return "Correct";
  }
  return "Correct";
}

std::string to_string(const Diagnosis& d) {
  std::string out(to_string(d.kind));
  if (d.rule) out += " (" + d.rule->name() + ")";
  return out;
}

bool location_less(const Location& a, const Location& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

State start_state(const Exercise& ex, const Expr& e) {
  return State{Environment{}, ExprZipper(e), ex.strategy};
}

namespace {

std::vector<BigStep> ordered_big_steps(const Exercise& ex, Engine& engine, const State& s) {
  auto steps = engine.big_step(s);
  std::vector<std::pair<std::string, BigStep>> keyed;
  for (auto& b : steps) keyed.emplace_back(state_key(b.state), std::move(b));
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& x, const auto& y) {
    if (x.second.rule != y.second.rule) return ex.rule_less(x.second.rule, y.second.rule);
    if (x.second.location != y.second.location)
      return location_less(x.second.location, y.second.location);
    return x.first < y.first;
  });
  std::vector<BigStep> out;
  for (auto& [k, b] : keyed) out.push_back(std::move(b));
  return out;
}

}  // namespace

std::vector<BigStep> allfirsts(const Exercise& ex, const State& s, StepBudget& budget) {
  RuleBook book = ex.rule_book();
  Engine engine(book, budget);
  return ordered_big_steps(ex, engine, s);
}

BigStep onefirst(const Exercise& ex, const State& s, StepBudget& budget) {
  auto all = allfirsts(ex, s, budget);
  if (all.empty()) throw Error(ErrorCode::NoStepAvailable, "no step is available from this state");
  return std::move(all.front());
}

std::vector<DerivationStep> derivation(const Exercise& ex, const State& s, StepBudget& budget) {
  RuleBook book = ex.rule_book();
  // One engine for the whole derivation: the lookahead checks of one step are
  // mostly the checks of the next.
  Engine engine(book, budget);
  std::vector<DerivationStep> out;
  State cur = s;
  for (;;) {
    auto all = ordered_big_steps(ex, engine, cur);
    if (all.empty()) break;
    auto& b = all.front();
    out.push_back(DerivationStep{b.rule, b.location, b.state, b.trace});
    cur = std::move(b.state);
  }
  if (engine.minor_sentences(cur).empty())
    throw Error(ErrorCode::Stuck, "derivation is stuck at " + print(cur.focus.unfocus()) +
                                      " with an unfinished strategy");
  return out;
}

bool ready(const Exercise& ex, const State& s) { return ex.is_ready(s.focus.unfocus()); }

std::size_t stepsremaining(const Exercise& ex, const State& s, StepBudget& budget) {
  return derivation(ex, s, budget).size();
}

namespace {

ExprZipper focus_at(const State& s, const Location& loc) {
  auto z = s.focus.to_root().descend(loc);
  if (!z) throw Error(ErrorCode::InvalidLocation, "location does not exist in the expression");
  return std::move(*z);
}

bool in_universe(const Exercise& ex, const RuleId& r) {
  auto u = ex.rule_universe();
  return std::find(u.begin(), u.end(), r) != u.end();
}

// First rewrite of `r` anywhere in the expression (preorder) whose result
// satisfies `accept`.
template <typename Accept>
bool applies_somewhere(const RuleBook& book, const RuleId& r, const State& s, Accept accept) {
  ExprZipper root = s.focus.to_root();
  for (const auto& loc : positions(root.focus())) {
    for (const auto& f : book.apply(r, s.env, *root.descend(loc)))
      if (accept(f.zipper.unfocus())) return true;
  }
  return false;
}

}  // namespace

State apply(const Exercise& ex, const RuleId& r, const Location& loc, const State& s) {
  if (!in_universe(ex, r)) throw Error(ErrorCode::UnknownRule, "unknown rule '" + r.name() + "'");
  ExprZipper z = focus_at(s, loc);
  auto results = ex.rule_book().apply(r, s.env, z);
  if (results.empty())
    throw Error(ErrorCode::RuleNotApplicable,
                r.name() + " is not applicable to " + print(z.focus()));
  return State{std::move(results.front().env), std::move(results.front().zipper), s.remaining};
}

std::vector<RuleId> applicable(const Exercise& ex, const Location& loc, const State& s) {
  ExprZipper z = focus_at(s, loc);
  RuleBook book = ex.rule_book();
  std::vector<RuleId> out;
  for (const auto& r : ex.rule_universe())
    if (!book.is_minor(r) && !book.apply(r, s.env, z).empty()) out.push_back(r);
  return out;
}

State generate(const Registry& reg, const std::string& code, std::optional<Difficulty> difficulty,
               std::uint64_t seed) {
  const Exercise& ex = reg.lookup(code);
  if (!ex.generator) throw Error(ErrorCode::NoGenerator, "exercise '" + code + "' has no generator");
  return start_state(ex, ex.generator(difficulty.value_or(Difficulty::Medium), seed));
}

Diagnosis diagnose(const Exercise& ex, const State& s, const Expr& submitted, StepBudget& budget) {
  using K = Diagnosis::Kind;
  const Expr current = s.focus.unfocus();
  RuleBook book = ex.rule_book();
  auto equivalent = [&](const Expr& e) { return ex.equivalence(e, submitted); };

  if (!ex.equivalence(current, submitted)) {
    for (const auto& r : ex.buggy_rule_set)
      if (applies_somewhere(book, r.id, s, equivalent)) return {K::Buggy, r.id};
    return {K::NotEq, std::nullopt};
  }
  if (ex.similarity(current, submitted)) return {K::Similar, std::nullopt};
  for (const auto& b : allfirsts(ex, s, budget))
    if (ex.similarity(submitted, b.state.focus.unfocus())) return {K::Expected, b.rule};
  for (const auto& r : ex.rule_universe())
    if (!book.is_minor(r) && applies_somewhere(book, r, s, equivalent)) return {K::Detour, r};
  return {K::Correct, std::nullopt};
}

}  // namespace strategem
