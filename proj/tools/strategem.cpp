// Command-line front end: JSON-lines server, interactive session, lint, solve.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "strategem/lint.hpp"
#include "strategem/protocol.hpp"
#include "strategem/services.hpp"

using namespace strategem;

namespace {

struct Options {
  std::string mode = "serve";
  std::string exercise = "powerExercise";
  std::uint64_t seed = 0;
  std::size_t budget = 0;  // 0: STRATEGEM_BUDGET or the default
  std::string difficulty = "medium";
  std::string expr;
  std::string target;
  bool opaque = false;
};

std::string show(const Location& loc) {
  std::string out = "[";
  for (std::size_t i = 0; i < loc.size(); ++i) out += (i ? "," : "") + std::to_string(loc[i]);
  return out + "]";
}

// Accepts "[1,0]", "1,0", "1 0" or "[]".
Location read_location(std::string text) {
  for (char& c : text)
    if (c == '[' || c == ']' || c == ',') c = ' ';
  std::istringstream in(text);
  Location loc;
  long long i;
  while (in >> i) {
    if (i < 0) throw Error(ErrorCode::InvalidLocation, "negative child index");
    loc.push_back(static_cast<std::size_t>(i));
  }
  if (!in.eof()) throw Error(ErrorCode::InvalidLocation, "cannot read location '" + text + "'");
  return loc;
}

SessionState initial(const Options& o, const Exercise& ex) {
  if (!o.expr.empty()) {
    Expr e = parse_expr(o.expr);
    return SessionState{start_state(ex, e), Replay{e, {}}};
  }
  State s = generate(default_registry(), ex.code, parse_difficulty(o.difficulty), o.seed);
  Expr e = s.focus.unfocus();
  return SessionState{std::move(s), Replay{e, {}}};
}

int run_lint(const Options& o) {
  Strategy s = fail();
  RuleBook book;
  try {
    const auto codes = default_registry().codes();
    if (std::find(codes.begin(), codes.end(), o.target) != codes.end()) {
      const Exercise& ex = default_registry().lookup(o.target);
      s = ex.strategy;
      book = ex.rule_book();
    } else {
      s = parse_strategy(o.target);
      if (!is_closed(s)) throw Error(ErrorCode::ParseError, "strategy has unbound variables");
    }
  } catch (const Error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  LintReport r = lint(s, o.opaque ? MinorMode::Opaque : MinorMode::Transparent, book);
  if (r.clean()) {
    std::cout << "clean\n";
    return 0;
  }
  for (const auto& f : r.findings) std::cout << to_string(f.kind) << " at " << f.path << ": " << f.detail << "\n";
  return 1;
}

int run_solve(const Options& o) {
  const Exercise& ex = default_registry().lookup(o.exercise);
  SessionState s = initial(o, ex);
  StepBudget budget(o.budget);
  std::cout << print(s.state.focus.unfocus()) << "\n";
  for (const auto& d : derivation(ex, s.state, budget))
    std::cout << "  => " << d.rule.name() << " at " << show(d.location) << "  " << print(d.state.focus.unfocus()) << "\n";
  return 0;
}

void interactive(const Options& o, std::istream& in, std::ostream& out) {
  const Exercise& ex = default_registry().lookup(o.exercise);
  SessionState cur = initial(o, ex);
  Location focus;  // where submissions are placed
  out << ex.code << ": " << print(cur.state.focus.unfocus()) << "\n";

  std::string line;
  while (out << "> " << std::flush, std::getline(in, line)) {
    std::istringstream words(line);
    std::string cmd;
    words >> cmd;
    std::string rest;
    std::getline(words, rest);
    rest.erase(0, rest.find_first_not_of(' '));
    if (cmd.empty()) continue;
    if (cmd == "quit") break;
    try {
      StepBudget budget(o.budget);
      const Expr root = cur.state.focus.unfocus();
      if (cmd == "hint") {
        BigStep b = onefirst(ex, cur.state, budget);
        out << b.rule.name() << " at " << show(b.location) << "\n";
      } else if (cmd == "steps") {
        out << stepsremaining(ex, cur.state, budget) << "\n";
      } else if (cmd == "apply") {
        std::istringstream args(rest);
        std::string rule, loc;
        args >> rule;
        std::getline(args, loc);
        cur = replace_focus(cur, apply(ex, RuleId(rule), read_location(loc), cur.state));
        out << print(cur.state.focus.unfocus()) << "\n";
      } else if (cmd == "focus") {
        Location loc = read_location(rest);
        if (!ExprZipper(root).descend(loc)) throw Error(ErrorCode::InvalidLocation, "no such position");
        focus = loc;
        out << "focus " << show(focus) << ": " << print(ExprZipper(root).descend(focus)->focus()) << "\n";
      } else if (cmd == "submit") {
        Expr part = parse_expr(rest);
        Expr whole = ExprZipper(root).descend(focus)->with_focus(part).unfocus();
        Diagnosis d = diagnose(ex, cur.state, whole, budget);
        out << to_string(d) << "\n";
        if (d.kind == Diagnosis::Kind::Expected) {
          for (const auto& b : allfirsts(ex, cur.state, budget))
            if (ex.similarity(whole, b.state.focus.unfocus())) {
              cur = advance(cur, b);
              break;
            }
        } else if (d.kind == Diagnosis::Kind::Detour || d.kind == Diagnosis::Kind::Correct) {
          cur = replace_focus(cur, State{cur.state.env, ExprZipper(whole), cur.state.remaining});
        }
        if (cur.state.focus.unfocus() != root) {
          focus.clear();
          out << print(cur.state.focus.unfocus()) << "\n";
        }
      } else if (cmd == "solve") {
        for (const auto& d : derivation(ex, cur.state, budget))
          out << d.rule.name() << " at " << show(d.location) << ": " << print(d.state.focus.unfocus()) << "\n";
      } else {
        out << "commands: hint, steps, apply <rule> <loc>, focus <loc>, submit <expr>, solve, quit\n";
      }
    } catch (const Error& e) {
      out << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rewrite strategies and feedback services for power expressions"};
  Options o;
  app.add_option("--mode", o.mode, "serve, interactive, lint or solve")
      ->check(CLI::IsMember({"serve", "interactive", "lint", "solve"}));
  app.add_option("--exercise", o.exercise, "exercise code");
  app.add_option("--seed", o.seed, "generator seed");
  app.add_option("--budget", o.budget, "step budget per request")->check(CLI::PositiveNumber);
  app.add_option("--difficulty", o.difficulty, "easy, medium or hard")
      ->check(CLI::IsMember({"easy", "medium", "hard"}));
  app.add_option("--expr", o.expr, "start expression instead of a generated one");
  app.add_flag("--opaque", o.opaque, "lint: minor rules count as progress");
  app.add_option("target", o.target, "lint: strategy term or exercise code");
  CLI11_PARSE(app, argc, argv);
  if (o.budget == 0) o.budget = default_budget();

  try {
    if (o.mode == "lint") {
      if (o.target.empty()) o.target = o.exercise;
      return run_lint(o);
    }
    if (o.mode == "solve") return run_solve(o);
    if (o.mode == "interactive") {
      interactive(o, std::cin, std::cout);
      return 0;
    }
    serve(std::cin, std::cout, default_registry(), ServeOptions{o.budget});
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 1;
  }
}
