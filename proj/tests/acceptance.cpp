// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "strategem/lint.hpp"
#include "strategem/protocol.hpp"
#include "strategem/services.hpp"
#include "strategem/traversal.hpp"
#include "toy.hpp"

using namespace strategem;

namespace {

// Pinned limits.
constexpr double kDerivationSeconds = 1.0;
constexpr double kSoundnessSeconds = 30.0;
constexpr double kSemanticsSeconds = 60.0;
constexpr std::uint64_t kRuns = 500;
constexpr int kToyStrategies = 200;
constexpr int kToyDepth = 5;
constexpr std::size_t kLemmaMaxLen = 4;
constexpr std::size_t kGoldenLines = 25;

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// Expression-level rule oracles, written against the rule definitions and
// nothing else in the library.
std::optional<Expr> oracle_add(const Expr& e, bool buggy) {
  auto m = e.as_mul();
  if (!m) return std::nullopt;
  auto l = m->left.as_power(), r = m->right.as_power();
  if (!l || !r || l->base != r->base) return std::nullopt;
  return Expr::power(l->base, buggy ? Integer(l->exponent * r->exponent) : Integer(l->exponent + r->exponent));
}
std::optional<Expr> oracle_mul(const Expr& e) {
  auto p = e.as_power();
  if (!p || !p->base.as_power()) return std::nullopt;
  return Expr::power(p->base.as_power()->base, p->base.as_power()->exponent * p->exponent);
}
std::optional<Expr> oracle_dist(const Expr& e) {
  auto p = e.as_power();
  if (!p || !p->base.as_mul()) return std::nullopt;
  auto m = p->base.as_mul();
  return Expr::mul(Expr::power(m->left, p->exponent), Expr::power(m->right, p->exponent));
}
std::optional<Expr> oracle_reci(const Expr& e) {
  auto p = e.as_power();
  if (!p) return std::nullopt;
  return Expr::recip(Expr::power(p->base, -p->exponent));
}

std::optional<Expr> rewrite_at(const Expr& e, const Location& loc, const std::function<std::optional<Expr>(const Expr&)>& f) {
  auto z = ExprZipper(e).descend(loc);
  if (!z) return std::nullopt;
  auto r = f(z->focus());
  if (!r) return std::nullopt;
  return z->with_focus(*r).unfocus();
}

std::set<std::string> state_keys(const std::vector<State>& v) {
  std::set<std::string> out;
  for (const auto& s : v) out.insert(state_key(s));
  return out;
}

State running_example(const Exercise& ex) { return start_state(ex, parse_expr("(a^3*a^4)^2")); }

Strategy state_s_strategy() {
  return choice(seq(somewhere(rule(kAddExp)), rule(kMulExp)),
                seq(rule(kDistExp), seq(repeat(rule(kMulExp)), rule(kAddExp))));
}

Outcome worked_derivation() {
  Outcome o;
  auto ex = power_exercise();
  StepBudget budget;
  auto t0 = std::chrono::steady_clock::now();
  auto steps = derivation(ex, running_example(ex), budget);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<std::string> majors, trace;
  for (const auto& s : steps) {
    majors.push_back(s.rule.name());
    for (const auto& r : s.trace) trace.push_back(r.name());
  }
  o.expect(majors == std::vector<std::string>{"AddExp", "MulExp"}, "majors differ");
  o.expect(!steps.empty() && print(steps.back().state.focus.unfocus()) == "a^14", "final expression is not a^14");
  o.expect(trace == std::vector<std::string>{"Enter(power)", "Down", "AppCheck", "AddExp", "Up", "AppCheck", "MulExp",
                                             "AppCheck", "Leave(power)"},
           "minor/major trace differs");
  o.expect(secs < kDerivationSeconds, "took " + std::to_string(secs) + " s");
  return o;
}

Outcome allfirsts_example() {
  Outcome o;
  auto ex = power_exercise();
  StepBudget budget;
  State s{Environment{}, ExprZipper(parse_expr("(a^3*a^4)^2")), state_s_strategy()};
  auto all = allfirsts(ex, s, budget);
  o.expect(all.size() == 2, std::to_string(all.size()) + " candidates");
  if (all.size() != 2) return o;
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& b : all) got.insert({b.rule.name(), print(b.state.focus.unfocus())});
  o.expect(got == std::set<std::pair<std::string, std::string>>{{"AddExp", "(a^7)^2"}, {"DistExp", "(a^3)^2*(a^4)^2"}},
           "candidate rules or expressions differ");
  o.expect(all[0].state.remaining == seq(rule(kUp), rule(kMulExp)), "AddExp remaining is not Up ; MulExp");
  o.expect(all[1].state.remaining == seq(repeat(rule(kMulExp)), rule(kAddExp)), "DistExp remaining differs");
  return o;
}

Outcome onefirst_example() {
  Outcome o;
  auto ex = power_exercise();
  ex.ordering = {kAddExp, kMulExp, kDistExp};
  StepBudget budget;
  State s{Environment{}, ExprZipper(parse_expr("(a^3*a^4)^2")), state_s_strategy()};
  auto b = onefirst(ex, s, budget);
  o.expect(b.rule == kAddExp, "picked " + b.rule.name());
  o.expect(print(b.state.focus.focus()) == "a^7" && b.state.focus.path() == Location{0}, "focus is not a^7 at [0]");
  o.expect(b.state.remaining == seq(rule(kUp), rule(kMulExp)), "remaining is not Up ; MulExp");
  ex.ordering = {kDistExp, kMulExp, kAddExp};
  o.expect(onefirst(ex, s, budget).rule == kDistExp, "reversed ordering does not pick DistExp");
  return o;
}

Outcome apply_example() {
  Outcome o;
  auto ex = power_exercise();
  auto s = apply(ex, kMulExp, Location{1}, start_state(ex, parse_expr("(a^3)^2*(a^4)^2")));
  o.expect(print(s.focus.unfocus()) == "(a^3)^2*a^8", "got " + print(s.focus.unfocus()));
  o.expect(s.focus.path() == Location{1}, "focus path is not [1]");
  return o;
}

Outcome diagnose_coverage() {
  Outcome o;
  auto ex = power_exercise();
  using K = Diagnosis::Kind;
  auto check = [&](const char* current, const Expr& submitted, K kind, std::optional<RuleId> rule) {
    StepBudget budget;
    auto d = diagnose(ex, start_state(ex, parse_expr(current)), submitted, budget);
    o.expect(d.kind == kind && d.rule == rule,
             std::string(current) + " -> " + print(submitted) + " gave " + to_string(d));
  };
  Expr running = parse_expr("(a^3*a^4)^2");

  // Submissions are built by the oracles, not typed in.
  auto expected = rewrite_at(running, {0}, [](const Expr& e) { return oracle_add(e, false); });
  auto buggy = oracle_add(parse_expr("a^3*a^4"), true);
  auto detour = oracle_reci(parse_expr("a^5"));
  o.expect(expected && buggy && detour, "oracle did not apply");
  if (!o.ok) return o;

  check("(a^3*a^4)^2", parse_expr("b^9"), K::NotEq, std::nullopt);
  check("a^3*a^4", *buggy, K::Buggy, kBugAddExp);
  check("(a^3*a^4)^2", running, K::Similar, std::nullopt);
  check("(a^3*a^4)^2", *expected, K::Expected, kAddExp);
  check("a^5", *detour, K::Detour, kReciExp);

  // Correct: no oracle rule applies anywhere in a*b, and the submission
  // is equivalent but not similar.
  Expr ab = parse_expr("a*b");
  for (const auto& loc : positions(ab))
    for (auto f : {+[](const Expr& e) { return oracle_add(e, false); }, +[](const Expr& e) { return oracle_mul(e); },
                   +[](const Expr& e) { return oracle_dist(e); }, +[](const Expr& e) { return oracle_reci(e); }})
      o.expect(!rewrite_at(ab, loc, f), "a rule applies to a*b");
  check("a*b", Expr::mul(Expr::recip(Expr::recip(Expr::var("a"))), Expr::var("b")), K::Correct, std::nullopt);
  return o;
}

Outcome lint_examples() {
  Outcome o;
  auto book = power_exercise().rule_book();
  Strategy left_recur = rec("x", seq(var("x"), rule(kAddExp)));
  Strategy left_recur_minor = rec("x", seq(rule(kDowns), seq(var("x"), rule(kAddExp))));
  Strategy left_strat =
      choice(label("l1", seq(rule(kAddExp), rule(kMulExp))), label("l2", seq(rule(kAddExp), rule(kDistExp))));
  Strategy left_strat_factored = seq(rule(kAddExp), choice(rule(kMulExp), rule(kDistExp)));
  using M = MinorMode;
  o.expect(!detect_left_recursion(left_recur, M::Transparent, book).clean(), "leftRecur passes transparent");
  o.expect(!detect_left_recursion(left_recur, M::Opaque, book).clean(), "leftRecur passes opaque");
  o.expect(!detect_left_recursion(left_recur_minor, M::Transparent, book).clean(), "leftRecur' passes transparent");
  o.expect(detect_left_recursion(left_recur_minor, M::Opaque, book).clean(), "leftRecur' flagged opaque");
  auto lf = detect_left_factors(left_strat, book);
  o.expect(lf.findings.size() == 1 && lf.findings[0].kind == LintKind::LeftFactor, "leftStrat not flagged");
  o.expect(lint(left_strat_factored, M::Transparent, book).clean(), "leftStrat' flagged");
  for (auto m : {M::Transparent, M::Opaque})
    o.expect(lint(write_as_power_of(), m, book).clean(), "writeAsPowerOf flagged");

  // Exit codes of the CLI.
  auto exit_of = [](const std::string& args) {
    std::string cmd = std::string(STRATEGEM_CLI) + " --mode lint " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  o.expect(exit_of("powerExercise") == 0, "lint powerExercise exit code");
  o.expect(exit_of("'mu x . x ; AddExp'") == 1, "lint leftRecur exit code");
  o.expect(exit_of("'(l1: AddExp ; MulExp) | (l2: AddExp ; DistExp)'") == 1, "lint leftStrat exit code");
  o.expect(exit_of("'mu x . ; ('") == 2, "parse error exit code");
  return o;
}

struct Run {
  Expr start;
  std::vector<DerivationStep> steps;
};

std::vector<Run>& runs() {
  static std::vector<Run> cache;
  return cache;
}

Difficulty difficulty_of(std::uint64_t seed) { return static_cast<Difficulty>(seed % 3); }

Outcome soundness() {
  Outcome o;
  auto ex = power_exercise();
  auto book = ex.rule_book();
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 0; seed < kRuns; ++seed) {
    Expr e = ex.generator(difficulty_of(seed), seed);
    State start = start_state(ex, e);
    StepBudget budget;
    auto steps = derivation(ex, start, budget);
    std::vector<RuleId> majors;
    for (const auto& s : steps) majors.push_back(s.rule);
    StepBudget rb;
    Engine eng(book, rb);
    o.expect(eng.recognize(majors, start), "trace of " + print(e) + " not recognized");
    runs().push_back(Run{e, std::move(steps)});
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.expect(secs < kSoundnessSeconds, "took " + std::to_string(secs) + " s");
  return o;
}

Outcome lemma_suite() {
  Outcome o;
  auto ex = power_exercise();
  o.expect(runs().size() == kRuns, "soundness runs missing");
  for (const auto& run : runs()) {
    const std::string name = print(run.start);
    o.expect(ex.is_suitable(run.start) && !ex.is_ready(run.start), name + ": start not suitable or already ready");
    Expr last = run.start;
    State cur = start_state(ex, run.start);
    for (const auto& step : run.steps) {
      Expr next = step.state.focus.unfocus();
      o.expect(eq_power(last, next), name + ": " + print(last) + " and " + print(next) + " not equivalent");
      StepBudget budget;
      auto all = allfirsts(ex, cur, budget);
      RuleId min = all.at(0).rule;
      for (const auto& b : all)
        if (ex.rule_less(b.rule, min)) min = b.rule;
      StepBudget b2;
      o.expect(onefirst(ex, cur, b2).rule == min, name + ": onefirst is not the ordering minimum");
      last = next;
      cur = step.state;
    }
    o.expect(ex.is_ready(last), name + ": final " + print(last) + " not ready");
  }
  return o;
}

std::set<toy::Word> split_union(const Strategy& s, std::size_t max_len, int depth) {
  std::set<toy::Word> out;
  for (const auto& sp : split(s))
    for (const auto& w : toy::language(sp.rest, max_len - 1, depth)) {
      toy::Word x{sp.atom.key()};
      x.insert(x.end(), w.begin(), w.end());
      out.insert(x);
    }
  return out;
}

Outcome semantics_equivalence() {
  Outcome o;
  auto rules = toy::rules();
  std::mt19937 rng(2024);
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kToyStrategies && o.ok; ++i) {
    Strategy s = toy::random_strategy(rng, kToyDepth);
    Expr e = toy::random_term(rng);
    const std::string name = print(s) + " @ " + print(e);
    StepBudget budget(1'000'000);
    Engine eng(rules, budget);
    State st{Environment{}, ExprZipper(e), s};
    o.expect(state_keys(eng.step_closure_end_states(st)) == state_keys(eng.run(st)), "end states differ: " + name);

    // Raise the unroll bound until both sides stop changing.
    int depth = 4;
    auto lhs = toy::language(s, kLemmaMaxLen, depth);
    auto rhs = split_union(s, kLemmaMaxLen, depth);
    for (;; depth += 2) {
      auto l2 = toy::language(s, kLemmaMaxLen, depth + 2);
      auto r2 = split_union(s, kLemmaMaxLen, depth + 2);
      if (l2 == lhs && r2 == rhs) break;
      lhs = std::move(l2);
      rhs = std::move(r2);
    }
    lhs.erase(toy::Word{});
    o.expect(lhs == rhs, "split lemma fails: " + print(s));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.expect(secs < kSemanticsSeconds, "took " + std::to_string(secs) + " s");
  return o;
}

std::string run_cli(const std::string& input) {
  std::string cmd = std::string(STRATEGEM_CLI) + " --mode serve < " + input;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe.get())) out.append(buf, n);
  return out;
}

Outcome protocol_goldens() {
  Outcome o;
  const std::string session = std::string(GOLDEN_DIR) + "/session.jsonl";
  std::ifstream in(session);
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  o.expect(lines == kGoldenLines, "session has " + std::to_string(lines) + " lines");
  std::string first = run_cli(session);
  std::string second = run_cli(session);
  std::ifstream gold(std::string(GOLDEN_DIR) + "/expected.jsonl");
  std::stringstream expected;
  expected << gold.rdbuf();
  o.expect(!first.empty() && first == second, "two runs differ");
  o.expect(first == expected.str(), "responses differ from the recorded goldens");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {1, "worked derivation", worked_derivation},
      {2, "allfirsts example", allfirsts_example},
      {3, "onefirst example", onefirst_example},
      {4, "apply example", apply_example},
      {5, "diagnose coverage", diagnose_coverage},
      {6, "lint", lint_examples},
      {7, "soundness over generated runs", soundness},
      {8, "lemma suite over generated runs", lemma_suite},
      {9, "semantics equivalence", semantics_equivalence},
      {10, "protocol goldens", protocol_goldens},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  (" << timing << ")";
    if (!o.ok) std::cout << "  " << o.detail;
    std::cout << '\n';
    failed += o.ok ? 0 : 1;
  }
  return failed;
}
