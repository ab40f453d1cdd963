#pragma once

// JSON-lines protocol: one request object per line, one response per request.
//
// State objects:
//   {"expr": text, "path": [i...], "env": {"bindings": {...}, "labels": [...]},
//    "strategy": absent | {"start": text, "trace": [entry...]} | {"term": text}}
// where a trace entry is ["step", rule, [i...], text] (a big step and the
// expression it produced) or ["set", text, [i...]] (expression replaced
// outside the strategy, remaining strategy kept).
// An absent strategy means the exercise strategy from the given expression.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "strategem/exercise.hpp"
#include "strategem/semantics.hpp"

namespace strategem {

using json = nlohmann::json;

struct ReplayEntry {
  bool is_step = true;  // false: a "set" entry
  RuleId rule;          // steps only
  Location location;    // step location, or focus path for "set"
  Expr expr;
};

struct Replay {
  Expr start;
  std::vector<ReplayEntry> trace;
};

/// A state plus how it travels on the wire.
struct SessionState {
  State state;
  std::optional<Replay> replay;  // empty: the remaining strategy is sent inline
};

json location_to_json(const Location& loc);
Location location_from_json(const json& j);

json state_to_json(const SessionState& s);
/// Throws Error(ParseError) for malformed objects, Error(InvalidLocation) for
/// bad paths and Error(InvalidState) when a trace cannot be replayed.
SessionState state_from_json(const json& j, const Exercise& ex, StepBudget& budget);

/// Taking big step `b` from `from`.
SessionState advance(const SessionState& from, const BigStep& b);
/// Replacing the focus outside the strategy (apply).
SessionState replace_focus(const SessionState& from, State next);

struct ServeOptions {
  std::size_t budget = StepBudget::kDefault;  // per request
};

/// Handles one request line and returns the response line (no newline).
std::string handle_request(const std::string& line, const Registry& reg, const ServeOptions& opts);

/// Reads requests until EOF, writing one response per line.
void serve(std::istream& in, std::ostream& out, const Registry& reg, const ServeOptions& opts);

}  // namespace strategem
