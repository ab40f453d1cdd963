#include <algorithm>

#include "strategem/exercise.hpp"
#include "strategem/lint.hpp"
#include "strategem/services.hpp"

namespace strategem {

namespace {

const Difficulty kLevels[] = {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard};

void fail_once(ValidationCheck& c, const std::string& witness) {
  if (!c.passed) return;
  c.passed = false;
  c.witness = witness;
}

}  // namespace

ValidationReport validate(const Exercise& ex, std::size_t samples, std::uint64_t seed) {
  ValidationReport report;
  RuleBook book = ex.rule_book();

  ValidationCheck lint_check{"lint", true, ""};
  for (const auto& f : lint(ex.strategy, MinorMode::Transparent, book).findings)
    fail_once(lint_check, std::string(to_string(f.kind)) + " at " + f.path + ": " + f.detail);
  report.checks.push_back(lint_check);
  if (!ex.generator) return report;

  ValidationCheck gen{"generator suitable and not ready", true, ""};
  ValidationCheck final_ready{"final state ready", true, ""};
  ValidationCheck same_class{"derivation stays in one equivalence class", true, ""};
  ValidationCheck sound{"rules preserve equivalence", true, ""};
  ValidationCheck minimal{"onefirst picks the ordering minimum", true, ""};

  auto check_rules_at = [&](const Expr& e) {
    State s{Environment{}, ExprZipper(e), ex.strategy};
    for (const auto& r : ex.rule_universe()) {
      for (const auto& loc : positions(e)) {
        for (const auto& f : book.apply(r, s.env, *s.focus.descend(loc))) {
          Expr after = f.zipper.unfocus();
          if (!ex.equivalence(e, after))
            fail_once(sound, r.name() + " maps " + print(e) + " to " + print(after));
        }
      }
    }
  };

  for (std::size_t i = 0; i < samples; ++i) {
    Expr e = ex.generator(kLevels[i % 3], seed + i);
    if (!ex.is_suitable(e) || ex.is_ready(e)) fail_once(gen, print(e));
    try {
      StepBudget budget(default_budget());
      State cur = start_state(ex, e);
      check_rules_at(e);
      for (;;) {
        auto all = allfirsts(ex, cur, budget);
        if (all.empty()) break;
        RuleId least = all.front().rule;
        for (const auto& b : all)
          if (ex.rule_less(b.rule, least)) least = b.rule;
        if (onefirst(ex, cur, budget).rule != least)
          fail_once(minimal, print(cur.focus.unfocus()));
        Expr before = cur.focus.unfocus();
        cur = std::move(all.front().state);
        Expr after = cur.focus.unfocus();
        if (!ex.equivalence(before, after))
          fail_once(same_class, print(before) + " then " + print(after));
        check_rules_at(after);
      }
      if (!ex.is_ready(cur.focus.unfocus()))
        fail_once(final_ready, print(e) + " ends at " + print(cur.focus.unfocus()));
    } catch (const Error& err) {
      fail_once(final_ready, print(e) + ": " + err.what());
    }
  }
  for (auto* c : {&gen, &final_ready, &same_class, &sound, &minimal}) report.checks.push_back(*c);
  return report;
}

}  // namespace strategem
