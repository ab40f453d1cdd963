#pragma once

// The power-expression exercise domain: rewrite rules, normalization and the
// predicates built on it.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "strategem/expr.hpp"
#include "strategem/semantics.hpp"
#include "strategem/strategy.hpp"

namespace strategem {

// Expression-level rules; nullopt when the pattern does not match.
std::optional<Expr> add_exp(const Expr& e);      // a^x * a^y  ->  a^(x+y)
std::optional<Expr> mul_exp(const Expr& e);      // (a^x)^y    ->  a^(x*y)
std::optional<Expr> dist_exp(const Expr& e);     // (a*b)^x    ->  a^x * b^x
std::optional<Expr> bug_add_exp(const Expr& e);  // a^x * a^y  ->  a^(x*y), the misconception
std::optional<Expr> reci_exp(const Expr& e);     // a^x        ->  1/a^(-x)

RewriteRule rule_add_exp();
RewriteRule rule_mul_exp();
RewriteRule rule_dist_exp();
RewriteRule rule_bug_add_exp();
RewriteRule rule_reci_exp();

inline const RuleId kAddExp{"AddExp"};
inline const RuleId kMulExp{"MulExp"};
inline const RuleId kDistExp{"DistExp"};
inline const RuleId kBugAddExp{"BugAddExp"};
inline const RuleId kReciExp{"ReciExp"};

/// At most one top-level simplification case, no recursion.
Expr simplify_power(const Expr& e);
Expr norm_power(const Expr& e);

bool eq_power(const Expr& a, const Expr& b);
bool sim_power(const Expr& a, const Expr& b);
bool suitable_power(const Expr& e);
bool ready_power(const Expr& e);

/// powers: repeat (bottomUp (AddExp | MulExp | DistExp)), labelled "power".
Strategy write_as_power_of();
inline const LabelId kPowerLabel = "power";

enum class Difficulty { Easy, Medium, Hard };

std::string_view to_string(Difficulty d);
/// Throws Error(InvalidArgument) for anything but easy/medium/hard.
Difficulty parse_difficulty(std::string_view text);
std::size_t max_depth(Difficulty d);

/// Deterministic in (difficulty, seed). Left-associated products, exponents
/// 2..9, at most two variables; the result is suitable and not ready.
Expr generate_power(Difficulty d, std::uint64_t seed);

}  // namespace strategem
