#pragma once

// Operational semantics of strategies: split, step, big step and run over
// states (environment x zipper x remaining strategy).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "strategem/error.hpp"
#include "strategem/expr.hpp"
#include "strategem/strategy.hpp"

namespace strategem {

struct Environment {
  std::map<std::string, std::string> bindings;
  std::vector<LabelId> labels;  // innermost label last

  friend bool operator==(const Environment&, const Environment&) = default;
};

std::string to_string(const Environment& env);

struct Focused {
  Environment env;
  ExprZipper zipper;
};

/// A named partial transformation on (environment, zipper). An empty result
/// means "not applicable".
struct RewriteRule {
  using Transform = std::function<std::vector<Focused>(const Environment&, const ExprZipper&)>;

  RuleId id;
  bool minor = false;
  Transform transform;
  bool focus_only = false;  // leaves the focus position alone; set by lift
};

/// Lifts an expression rule to a zipper rule: applied at the focus, context untouched.
RewriteRule lift(RuleId id, bool minor, std::function<std::optional<Expr>(const Expr&)> f);

// Names of the built-in minor rules.
inline const RuleId kUp{"Up"};
inline const RuleId kDowns{"Down"};  // one successor per child
inline const RuleId kLeft{"Left"};
inline const RuleId kRight{"Right"};
inline const RuleId kDownSelected{"DownSel"};  // child index read from env key "@child"
inline const RuleId kAppCheck{"AppCheck"};    // pseudo rule recording a successful ~s
inline constexpr const char* kChildKey = "@child";

RuleId down_to(std::size_t i);      // Down(i)
RuleId enter(const LabelId& l);    // Enter(l)
RuleId leave(const LabelId& l);    // Leave(l)

/// The rule universe visible to the engine: user rules plus the built-in
/// navigation, label and AppCheck minors.
class RuleBook {
 public:
  RuleBook() = default;
  explicit RuleBook(std::vector<RewriteRule> rules);

  void add(RewriteRule r);

  bool contains(const RuleId& id) const;
  bool is_minor(const RuleId& id) const;
  /// The rule never moves the focus above where it started.
  bool stays_below(const RuleId& id) const;
  std::vector<Focused> apply(const RuleId& id, const Environment& env, const ExprZipper& z) const;
  const RewriteRule* find(const RuleId& id) const;
  std::vector<RuleId> user_rules() const;

 private:
  std::map<RuleId, RewriteRule> rules_;
};

struct State {
  Environment env;
  ExprZipper focus;
  Strategy remaining;
};

/// Canonical serialization; total order on states is lexicographic on this key.
std::string state_key(const State& s);
bool same_state(const State& a, const State& b);

/// A sentence symbol: a rule reference or an applicability check.
class Atom {
 public:
  static Atom of_rule(RuleId id);
  static Atom of_check(Strategy s);

  bool is_rule() const noexcept { return !check_.has_value(); }
  const RuleId& rule() const { return rule_; }
  const Strategy& check_body() const { return *check_; }
  const std::string& key() const noexcept { return key_; }

  friend bool operator==(const Atom& a, const Atom& b) { return a.key_ == b.key_; }
  friend bool operator<(const Atom& a, const Atom& b) { return a.key_ < b.key_; }

 private:
  RuleId rule_;
  std::optional<Strategy> check_;
  std::string key_;
};

using Sentence = std::vector<Atom>;
std::string to_string(const Sentence& s);

struct Split {
  Atom atom;
  Strategy rest;
};

/// Execution guard: every transition (major, minor or check) costs one unit.
class StepBudget {
 public:
  static constexpr std::size_t kDefault = 10'000;

  explicit StepBudget(std::size_t limit = kDefault);

  std::size_t limit() const noexcept { return limit_; }
  std::size_t used() const noexcept { return used_; }

  /// Throws BudgetExceeded(partial) once the limit is passed.
  void charge(const std::vector<std::string>& partial);

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

/// Reads STRATEGEM_BUDGET, falling back to StepBudget::kDefault.
std::size_t default_budget();

/// All ways to split s into a first atom and the remaining strategy. Throws
/// Error(LeftRecursion) if a mu node is revisited without consuming an atom.
std::vector<Split> split(const Strategy& s);

/// Sentences of L(s) of length <= max_len using at most max_unroll nested
/// unrollings. Labels expand to Enter/Leave atoms.
std::set<Sentence> language_upto(const Strategy& s, std::size_t max_len, std::size_t max_unroll,
                                 std::size_t node_budget = 1'000'000);

/// Keeps only non-minor rule atoms of each sentence.
std::set<std::vector<RuleId>> major_language(const std::set<Sentence>& lang, const RuleBook& rules);

/// L(s) contains a sentence of minor rules and checks only (including epsilon).
bool accepts_empty(const Strategy& s, const RuleBook& rules);

struct Transition {
  RuleId rule;
  State state;
};

struct BigStep {
  RuleId rule;         // the major rule
  Location location;   // focus path where the major rule was applied
  State state;
  std::vector<RuleId> trace;  // minors, the major, and trailing minors
};

struct MinorCompletion {
  std::vector<RuleId> sentence;
  State state;
};

/// Evaluation context for one service call. Holds the rule book, the shared
/// step budget, and a memo for applicability checks.
class Engine {
 public:
  Engine(const RuleBook& rules, StepBudget& budget) : rules_(rules), budget_(budget) {}
  Engine(RuleBook&&, StepBudget&) = delete;  // the engine keeps a reference

  const RuleBook& rules() const noexcept { return rules_; }

  std::vector<Transition> step(const State& s);
  std::vector<BigStep> big_step(const State& s);
  std::vector<MinorCompletion> minor_sentences(const State& s);
  std::vector<State> run(const State& s);
  bool recognize(const std::vector<RuleId>& majors, const State& s);

  /// Every end state reachable with single steps; the reference closure that
  /// run() must agree with.
  std::vector<State> step_closure_end_states(const State& s);

 private:
  std::vector<Split> split_charged(const Strategy& s);
  bool has_end_state(const State& s);
  bool is_local(const Strategy& s);
  bool major_reachable(const State& s);
  void charge();

  static constexpr std::size_t kMaxNesting = 1'000;
  struct NestingGuard {
    explicit NestingGuard(Engine& e);
    ~NestingGuard();
    NestingGuard(const NestingGuard&) = delete;
    NestingGuard& operator=(const NestingGuard&) = delete;
    Engine& engine;
  };

  const RuleBook& rules_;
  StepBudget& budget_;
  std::vector<std::string> trace_;
  std::unordered_map<std::string, bool> check_memo_;
  std::unordered_map<std::uint64_t, bool> local_memo_;
  std::size_t nesting_ = 0;
};

}  // namespace strategem
