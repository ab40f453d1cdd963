#include "strategem/protocol.hpp"

#include <istream>
#include <ostream>
#include <set>

#include "strategem/error.hpp"
#include "strategem/lint.hpp"
#include "strategem/services.hpp"

namespace strategem {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

void only_fields(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) malformed(std::string(what) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) malformed("unknown field '" + k + "' in " + what);
  }
}

const std::string& text_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  if (!it->is_string()) malformed(std::string("field '") + key + "' must be a string");
  return it->get_ref<const std::string&>();
}

json env_to_json(const Environment& env) {
  json b = json::object();
  for (const auto& [k, v] : env.bindings) b[k] = v;
  return json{{"bindings", b}, {"labels", env.labels}};
}

Environment env_from_json(const json& j) {
  only_fields(j, {"bindings", "labels"}, "env");
  Environment env;
  if (auto it = j.find("bindings"); it != j.end()) {
    if (!it->is_object()) malformed("env bindings must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) malformed("env binding '" + k + "' must be a string");
      env.bindings[k] = v.get<std::string>();
    }
  }
  if (auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array()) malformed("env labels must be an array");
    for (const auto& l : *it) {
      if (!l.is_string()) malformed("env labels must be strings");
      env.labels.push_back(l.get<std::string>());
    }
  }
  return env;
}

json entry_to_json(const ReplayEntry& e) {
  if (e.is_step) return json::array({"step", e.rule.name(), location_to_json(e.location), print(e.expr)});
  return json::array({"set", print(e.expr), location_to_json(e.location)});
}

ReplayEntry entry_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) malformed("trace entries must be arrays");
  const auto kind = j[0].get<std::string>();
  if (kind == "step" && j.size() == 4 && j[1].is_string() && j[3].is_string())
    return ReplayEntry{true, RuleId(j[1].get<std::string>()), location_from_json(j[2]),
                       parse_expr(j[3].get<std::string>())};
  if (kind == "set" && j.size() == 3 && j[1].is_string())
    return ReplayEntry{false, RuleId(), location_from_json(j[2]), parse_expr(j[1].get<std::string>())};
  malformed("trace entry must be [\"step\", rule, path, expr] or [\"set\", expr, path]");
}

ExprZipper focus_at(const Expr& root, const Location& path) {
  auto z = ExprZipper(root).descend(path);
  if (!z) throw Error(ErrorCode::InvalidLocation, "path does not exist in the expression");
  return std::move(*z);
}

SessionState replay(const Replay& r, const Exercise& ex, StepBudget& budget) {
  State cur = start_state(ex, r.start);
  std::size_t index = 0;
  for (const auto& e : r.trace) {
    ++index;
    if (!e.is_step) {
      cur = State{cur.env, focus_at(e.expr, e.location), cur.remaining};
      continue;
    }
    std::optional<State> next;
    for (auto& b : allfirsts(ex, cur, budget)) {
      if (b.rule == e.rule && b.location == e.location && b.state.focus.unfocus() == e.expr) {
        next = std::move(b.state);
        break;
      }
    }
    if (!next)
      throw Error(ErrorCode::InvalidState,
                  "trace entry " + std::to_string(index) + " (" + e.rule.name() + ") cannot be replayed");
    cur = std::move(*next);
  }
  return SessionState{std::move(cur), r};
}

}  // namespace

json location_to_json(const Location& loc) {
  json out = json::array();
  for (auto i : loc) out.push_back(i);
  return out;
}

Location location_from_json(const json& j) {
  if (!j.is_array()) malformed("a location must be an array of child indices");
  Location out;
  for (const auto& i : j) {
    if (!i.is_number_unsigned()) malformed("a location must be an array of child indices");
    out.push_back(i.get<std::size_t>());
  }
  return out;
}

json state_to_json(const SessionState& s) {
  json out{{"expr", print(s.state.focus.unfocus())},
           {"path", location_to_json(s.state.focus.path())},
           {"env", env_to_json(s.state.env)}};
  if (s.replay) {
    json trace = json::array();
    for (const auto& e : s.replay->trace) trace.push_back(entry_to_json(e));
    out["strategy"] = json{{"start", print(s.replay->start)}, {"trace", trace}};
  } else {
    out["strategy"] = json{{"term", print(s.state.remaining)}};
  }
  return out;
}

SessionState state_from_json(const json& j, const Exercise& ex, StepBudget& budget) {
  only_fields(j, {"expr", "path", "env", "strategy"}, "state");
  Expr root = parse_expr(text_field(j, "expr"));
  Location path = j.contains("path") ? location_from_json(j["path"]) : Location{};
  ExprZipper z = focus_at(root, path);
  std::optional<Environment> env;
  if (j.contains("env")) env = env_from_json(j["env"]);

  if (!j.contains("strategy"))
    return SessionState{State{env.value_or(Environment{}), z, ex.strategy}, Replay{root, {}}};

  const json& sj = j["strategy"];
  if (sj.is_object() && sj.contains("term")) {
    only_fields(sj, {"term"}, "strategy");
    Strategy s = parse_strategy(text_field(sj, "term"));
    if (!is_closed(s)) malformed("strategy term has unbound variables");
    return SessionState{State{env.value_or(Environment{}), z, s}, std::nullopt};
  }
  only_fields(sj, {"start", "trace"}, "strategy");
  Replay r{parse_expr(text_field(sj, "start")), {}};
  if (auto it = sj.find("trace"); it != sj.end()) {
    if (!it->is_array()) malformed("strategy trace must be an array");
    for (const auto& e : *it) r.trace.push_back(entry_from_json(e));
  }
  SessionState out = replay(r, ex, budget);
  if (env && *env != out.state.env)
    throw Error(ErrorCode::InvalidState, "env does not match the replayed trace");
  if (out.state.focus.unfocus() != root || out.state.focus.path() != path)
    out = replace_focus(out, State{out.state.env, z, out.state.remaining});
  return out;
}

SessionState advance(const SessionState& from, const BigStep& b) {
  SessionState out{b.state, from.replay};
  if (out.replay)
    out.replay->trace.push_back(ReplayEntry{true, b.rule, b.location, b.state.focus.unfocus()});
  return out;
}

SessionState replace_focus(const SessionState& from, State next) {
  SessionState out{std::move(next), from.replay};
  if (out.replay)
    out.replay->trace.push_back(
        ReplayEntry{false, RuleId(), out.state.focus.path(), out.state.focus.unfocus()});
  return out;
}

namespace {

json step_to_json(const SessionState& from, const BigStep& b) {
  return json{{"rule", b.rule.name()},
              {"location", location_to_json(b.location)},
              {"state", state_to_json(advance(from, b))}};
}

std::optional<std::uint64_t> seed_field(const json& req) {
  auto it = req.find("seed");
  if (it == req.end()) return std::nullopt;
  if (!it->is_number_unsigned()) malformed("seed must be a non-negative integer");
  return it->get<std::uint64_t>();
}

json lint_result(const json& req, const Registry& reg) {
  Strategy s = fail();
  RuleBook book;
  if (req.contains("strategy")) {
    s = parse_strategy(text_field(req, "strategy"));
    if (!is_closed(s)) malformed("strategy term has unbound variables");
  } else {
    const Exercise& ex = reg.lookup(text_field(req, "exercise"));
    s = ex.strategy;
    book = ex.rule_book();
  }
  MinorMode mode = MinorMode::Transparent;
  if (req.contains("mode")) {
    const auto& m = text_field(req, "mode");
    if (m == "opaque")
      mode = MinorMode::Opaque;
    else if (m != "transparent")
      throw Error(ErrorCode::InvalidArgument, "mode must be transparent or opaque");
  }
  LintReport report = lint(s, mode, book);
  json findings = json::array();
  for (const auto& f : report.findings)
    findings.push_back({{"kind", to_string(f.kind)}, {"path", f.path}, {"detail", f.detail}});
  return json{{"clean", report.clean()}, {"findings", findings}};
}

json dispatch(const json& req, const Registry& reg, StepBudget& budget) {
  only_fields(req,
              {"service", "exercise", "state", "rule", "location", "expression", "difficulty", "seed",
               "strategy", "mode"},
              "request");
  const std::string& service = text_field(req, "service");
  if (service == "lint") return lint_result(req, reg);

  static const std::set<std::string> kServices = {"allfirsts", "onefirst",   "derivation",
                                                  "ready",     "stepsremaining", "apply",
                                                  "applicable", "generate",  "diagnose"};
  if (!kServices.count(service)) throw Error(ErrorCode::UnknownService, "unknown service '" + service + "'");

  const std::string& code = text_field(req, "exercise");
  if (service == "generate") {
    std::optional<Difficulty> d;
    if (req.contains("difficulty")) d = parse_difficulty(text_field(req, "difficulty"));
    State s = generate(reg, code, d, seed_field(req).value_or(0));
    Expr e = s.focus.unfocus();
    return state_to_json(SessionState{std::move(s), Replay{e, {}}});
  }

  const Exercise& ex = reg.lookup(code);
  if (!req.contains("state")) malformed("missing field 'state'");
  SessionState ss = state_from_json(req["state"], ex, budget);
  const State& s = ss.state;

  if (service == "allfirsts") {
    json out = json::array();
    for (const auto& b : allfirsts(ex, s, budget)) out.push_back(step_to_json(ss, b));
    return out;
  }
  if (service == "onefirst") return step_to_json(ss, onefirst(ex, s, budget));
  if (service == "derivation") {
    json steps = json::array();
    for (const auto& d : derivation(ex, s, budget))
      steps.push_back(json::array({d.rule.name(), print(d.state.focus.unfocus())}));
    return json{{"steps", steps}};
  }
  if (service == "ready") return ready(ex, s);
  if (service == "stepsremaining") return stepsremaining(ex, s, budget);
  if (service == "applicable") {
    Location loc = req.contains("location") ? location_from_json(req["location"]) : Location{};
    json out = json::array();
    for (const auto& r : applicable(ex, loc, s)) out.push_back(r.name());
    return out;
  }
  if (service == "apply") {
    Location loc = req.contains("location") ? location_from_json(req["location"]) : Location{};
    State next = apply(ex, RuleId(text_field(req, "rule")), loc, s);
    return state_to_json(replace_focus(ss, std::move(next)));
  }
  // diagnose
  Diagnosis d = diagnose(ex, s, parse_expr(text_field(req, "expression")), budget);
  json out{{"diagnosis", to_string(d.kind)}};
  if (d.rule) out["rule"] = d.rule->name();
  return out;
}

json error_json(const Error& e) {
  json err{{"code", to_string(e.code())}, {"message", e.what()}};
  if (auto b = dynamic_cast<const BudgetExceeded*>(&e)) err["trace"] = b->partial_trace();
  return json{{"error", err}};
}

}  // namespace

std::string handle_request(const std::string& line, const Registry& reg, const ServeOptions& opts) {
  json response;
  try {
    json req;
    try {
      req = json::parse(line);
    } catch (const json::parse_error& e) {
      malformed(std::string("malformed JSON: ") + e.what());
    }
    StepBudget budget(opts.budget);
    response = json{{"ok", dispatch(req, reg, budget)}};
  } catch (const Error& e) {
    response = error_json(e);
  } catch (const json::exception& e) {
    response = error_json(Error(ErrorCode::ParseError, e.what()));
  }
  return response.dump(-1, ' ', false, json::error_handler_t::replace);
}

void serve(std::istream& in, std::ostream& out, const Registry& reg, const ServeOptions& opts) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out << handle_request(line, reg, opts) << '\n' << std::flush;
  }
}

}  // namespace strategem
