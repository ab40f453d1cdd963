#pragma once

// Strategy terms: the combinator language over rewrite rules.
//
//   s ::= r | ~s | s ; s | s | s | succeed | fail | l: s | mu x . s | x

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace strategem {

/// Name of a rewrite rule. Printable, no whitespace.
class RuleId {
 public:
  RuleId() = default;
  explicit RuleId(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const RuleId&, const RuleId&) = default;
  friend bool operator==(const RuleId&, const RuleId&) = default;

 private:
  std::string name_;
};

using LabelId = std::string;
using VarId = std::string;

class Strategy {
 public:
  struct Rule {
    RuleId id;
  };
  struct Check;
  struct Seq;
  struct Choice;
  struct Succeed {};
  struct Fail {};
  struct Label;
  struct Rec;
  struct Var {
    VarId name;
  };
  using Node = std::variant<Rule, Check, Seq, Choice, Succeed, Fail, Label, Rec, Var>;

  const Node& node() const noexcept;
  std::uint64_t hash() const noexcept { return hash_; }
  const void* identity() const noexcept { return node_.get(); }

  template <typename T>
  const T* as() const noexcept;
  template <typename T>
  bool is() const noexcept;

  friend bool operator==(const Strategy& a, const Strategy& b);

 private:
  Strategy(std::shared_ptr<const Node> n, std::uint64_t h) : node_(std::move(n)), hash_(h) {}
  friend Strategy make_strategy(Node n);

  std::shared_ptr<const Node> node_;
  std::uint64_t hash_;
};

struct Strategy::Check {
  Strategy body;
};
struct Strategy::Seq {
  Strategy first;
  Strategy second;
};
struct Strategy::Choice {
  Strategy left;
  Strategy right;
};
struct Strategy::Label {
  LabelId label;
  Strategy body;
};
struct Strategy::Rec {
  VarId var;
  Strategy body;
};

inline const Strategy::Node& Strategy::node() const noexcept { return *node_; }

template <typename T>
const T* Strategy::as() const noexcept {
  return std::get_if<T>(node_.get());
}

template <typename T>
bool Strategy::is() const noexcept {
  return std::holds_alternative<T>(*node_);
}

Strategy make_strategy(Strategy::Node n);

// Primitive constructors.
Strategy rule(RuleId id);
Strategy rule(std::string_view name);
Strategy check(Strategy s);
Strategy seq(Strategy a, Strategy b);
Strategy choice(Strategy a, Strategy b);
Strategy succeed();
Strategy fail();
Strategy label(LabelId l, Strategy s);
Strategy rec(VarId v, Strategy body);
Strategy var(VarId v);

// Derived combinators; each returns its literal desugaring.
Strategy orelse(Strategy a, Strategy b);  // a |> b = a | (~a ; b)
Strategy option(Strategy s);              // s | succeed
Strategy try_(Strategy s);                // s |> succeed
Strategy repeat(Strategy s);              // mu x . try (s ; x)

/// One-step unfolding of a Rec node; identity on everything else.
Strategy unroll(const Strategy& s);

/// Replaces free occurrences of Var(v) by `replacement`.
Strategy substitute(const Strategy& s, const VarId& v, const Strategy& replacement);

/// Removes Succeed/Fail units along the Seq/Choice spine. Language-preserving.
Strategy simplify(const Strategy& s);

/// epsilon in L(s). Labels always contribute Enter/Leave atoms and are never nullable.
bool nullable(const Strategy& s);

bool is_closed(const Strategy& s);

/// Rule names occurring anywhere in s, including inside checks.
std::set<RuleId> rules_in(const Strategy& s);

/// Concrete syntax: `;` sequence, `|` choice, `~` check, `l: s` label,
/// `mu x . s` recursion, `succeed`, `fail`, bare rule names.
std::string print(const Strategy& s);

/// Parses the concrete syntax. Identifiers bound by an enclosing `mu` are
/// variables; everything else is a rule name. Also accepts repeat(s), try(s),
/// option(s), once(s), somewhere(s), bottomUp(s) and topDown(s), which parse
/// to their desugared terms. Throws Error(ParseError).
Strategy parse_strategy(std::string_view text);

}  // namespace strategem
