#pragma once

// Static checks on strategies: left recursion and left factors.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "strategem/semantics.hpp"
#include "strategem/strategy.hpp"

namespace strategem {

enum class LintKind { LeftRecursion, LeftFactor };
std::string_view to_string(LintKind k);

struct Finding {
  LintKind kind;
  std::string path;  // strategy-tree path, "/" for the root, "/1/0" for nested children
  std::string detail;
};

struct LintReport {
  std::vector<Finding> findings;
  bool clean() const noexcept { return findings.empty(); }
};

/// How minor rules count when looking for a Var reached without progress.
/// Transparent: minors do not consume (once-style descent still does).
/// Opaque: minors consume like majors.
enum class MinorMode { Transparent, Opaque };

LintReport detect_left_recursion(const Strategy& s, MinorMode mode = MinorMode::Transparent,
                                 const RuleBook& rules = RuleBook{});

/// Flags choices whose branches share a first major rule, looking through
/// minors, labels and checks and unrolling recursion at most `max_unroll` times.
LintReport detect_left_factors(const Strategy& s, const RuleBook& rules = RuleBook{},
                               std::size_t max_unroll = 4);

/// Both detectors, findings concatenated.
LintReport lint(const Strategy& s, MinorMode mode = MinorMode::Transparent,
                const RuleBook& rules = RuleBook{});

/// Execution guard for run/allfirsts/derivation. Throws Error(InvalidArgument) for 0.
StepBudget with_step_budget(std::size_t budget);

}  // namespace strategem
