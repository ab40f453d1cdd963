#include "strategem/lint.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace strategem {

std::string_view to_string(LintKind k) {
  return k == LintKind::LeftRecursion ? "LeftRecursion" : "LeftFactor";
}

StepBudget with_step_budget(std::size_t budget) { return StepBudget(budget); }

namespace {

std::string render(const std::vector<int>& path) {
  if (path.empty()) return "/";
  std::string out;
  for (int i : path) out += "/" + std::to_string(i);
  return out;
}

// Down ; (s ; Up): moves to a strict subterm before s runs.
bool is_once(const Strategy& s) {
  auto outer = s.as<Strategy::Seq>();
  if (!outer) return false;
  auto down = outer->first.as<Strategy::Rule>();
  auto inner = outer->second.as<Strategy::Seq>();
  if (!down || down->id != kDowns || !inner) return false;
  auto up = inner->second.as<Strategy::Rule>();
  return up && up->id == kUp;
}

class LeftRecursion {
 public:
  LeftRecursion(MinorMode mode, const RuleBook& rules) : transparent_(mode == MinorMode::Transparent), rules_(rules) {}

  void scan(const Strategy& s, std::vector<int>& path, LintReport& out) {
    if (auto r = s.as<Strategy::Rec>()) {
      if (leads_to(r->body, r->var))
        out.findings.push_back({LintKind::LeftRecursion, render(path),
                                "'" + r->var + "' is reachable without consuming a rule"});
    }
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Strategy::Check> || std::is_same_v<T, Strategy::Label> ||
                        std::is_same_v<T, Strategy::Rec>) {
            child(x.body, 0, path, out);
          } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
            child(x.first, 0, path, out);
            child(x.second, 1, path, out);
          } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
            child(x.left, 0, path, out);
            child(x.right, 1, path, out);
          }
        },
        s.node());
  }

 private:
  void child(const Strategy& s, int i, std::vector<int>& path, LintReport& out) {
    path.push_back(i);
    scan(s, path, out);
    path.pop_back();
  }

  // Can s be passed without consuming anything?
  bool passable(const Strategy& s) const {
    if (transparent_ && is_once(s)) return false;
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Strategy::Rule>) return transparent_ && rules_.is_minor(x.id);
          else if constexpr (std::is_same_v<T, Strategy::Check> || std::is_same_v<T, Strategy::Succeed>)
            return true;
          else if constexpr (std::is_same_v<T, Strategy::Seq>)
            return passable(x.first) && passable(x.second);
          else if constexpr (std::is_same_v<T, Strategy::Choice>)
            return passable(x.left) || passable(x.right);
          else if constexpr (std::is_same_v<T, Strategy::Label>)
            return transparent_ && passable(x.body);
          else if constexpr (std::is_same_v<T, Strategy::Rec>)
            return passable(x.body);
          else return false;
        },
        s.node());
  }

  // Is Var(v) reachable at the start of s without consuming?
  bool leads_to(const Strategy& s, const VarId& v) const {
    if (transparent_ && is_once(s)) return false;
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Strategy::Var>) return x.name == v;
          else if constexpr (std::is_same_v<T, Strategy::Check>) return leads_to(x.body, v);
          else if constexpr (std::is_same_v<T, Strategy::Seq>)
            return leads_to(x.first, v) || (passable(x.first) && leads_to(x.second, v));
          else if constexpr (std::is_same_v<T, Strategy::Choice>)
            return leads_to(x.left, v) || leads_to(x.right, v);
          else if constexpr (std::is_same_v<T, Strategy::Label>)
            return transparent_ && leads_to(x.body, v);
          else if constexpr (std::is_same_v<T, Strategy::Rec>)
            return x.var != v && leads_to(x.body, v);
          else return false;
        },
        s.node());
  }

  bool transparent_;
  const RuleBook& rules_;
};

struct FirstSet {
  std::set<RuleId> majors;
  bool passable = false;  // can finish without a major rule
  bool truncated = false;
  bool checks = false;
};

class LeftFactors {
 public:
  LeftFactors(const RuleBook& rules, std::size_t max_unroll) : rules_(rules), max_unroll_(max_unroll) {}

  void scan(const Strategy& s, std::vector<int>& path, LintReport& out) {
    if (auto c = s.as<Strategy::Choice>(); c && !left_biased(*c)) {
      FirstSet a = first(c->left, max_unroll_);
      FirstSet b = first(c->right, max_unroll_);
      std::vector<std::string> common;
      for (const auto& r : a.majors)
        if (b.majors.count(r)) common.push_back(r.name());
      std::string note = a.checks || b.checks ? "; applicability checks ignored" : "";
      if (!common.empty()) {
        std::string list;
        for (const auto& n : common) list += (list.empty() ? "" : ", ") + n;
        out.findings.push_back({LintKind::LeftFactor, render(path), "common first rule " + list + note});
      } else if (a.truncated || b.truncated) {
        out.findings.push_back({LintKind::LeftFactor, render(path),
                                "possible: first rules not exhausted after " +
                                    std::to_string(max_unroll_) + " unrollings" + note});
      }
    }
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Strategy::Check> || std::is_same_v<T, Strategy::Label>) {
            child(x.body, 0, path, out);
          } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
            bound_[x.var].push_back(s);
            child(x.body, 0, path, out);
            bound_[x.var].pop_back();
          } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
            child(x.first, 0, path, out);
            child(x.second, 1, path, out);
          } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
            child(x.left, 0, path, out);
            child(x.right, 1, path, out);
          }
        },
        s.node());
  }

 private:
  void child(const Strategy& s, int i, std::vector<int>& path, LintReport& out) {
    path.push_back(i);
    scan(s, path, out);
    path.pop_back();
  }

  // a | (~a ; b) commits to a whenever a applies, so the branches never compete.
  static bool left_biased(const Strategy::Choice& c) {
    auto rhs = c.right.as<Strategy::Seq>();
    if (!rhs) return false;
    auto chk = rhs->first.as<Strategy::Check>();
    return chk && chk->body == c.left;
  }

  FirstSet first(const Strategy& s, std::size_t depth) const {
    return std::visit(
        [&](const auto& x) -> FirstSet {
          using T = std::decay_t<decltype(x)>;
          FirstSet f;
          if constexpr (std::is_same_v<T, Strategy::Rule>) {
            if (rules_.is_minor(x.id))
              f.passable = true;
            else
              f.majors.insert(x.id);
          } else if constexpr (std::is_same_v<T, Strategy::Check>) {
            f.passable = f.checks = true;
          } else if constexpr (std::is_same_v<T, Strategy::Succeed>) {
            f.passable = true;
          } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
            f = first(x.first, depth);
            if (f.passable) {
              FirstSet g = first(x.second, depth);
              f.majors.insert(g.majors.begin(), g.majors.end());
              f.passable = g.passable;
              f.truncated |= g.truncated;
              f.checks |= g.checks;
            }
          } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
            f = first(x.left, depth);
            FirstSet g = first(x.right, depth);
            f.majors.insert(g.majors.begin(), g.majors.end());
            f.passable |= g.passable;
            f.truncated |= g.truncated;
            f.checks |= g.checks;
          } else if constexpr (std::is_same_v<T, Strategy::Label>) {
            f = first(x.body, depth);
          } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
            if (depth == 0)
              f.truncated = true;
            else
              f = first(unroll(s), depth - 1);
          } else if constexpr (std::is_same_v<T, Strategy::Var>) {
            // Free here, bound by an enclosing mu of the scanned tree.
            auto it = bound_.find(x.name);
            if (it != bound_.end() && !it->second.empty()) {
              if (depth == 0)
                f.truncated = true;
              else
                f = first(unroll(it->second.back()), depth - 1);
            }
          }
          return f;
        },
        s.node());
  }


  const RuleBook& rules_;
  std::size_t max_unroll_;
  std::map<VarId, std::vector<Strategy>> bound_;
};

}  // namespace

LintReport detect_left_recursion(const Strategy& s, MinorMode mode, const RuleBook& rules) {
  LintReport out;
  std::vector<int> path;
  LeftRecursion(mode, rules).scan(s, path, out);
  return out;
}

LintReport detect_left_factors(const Strategy& s, const RuleBook& rules, std::size_t max_unroll) {
  LintReport out;
  std::vector<int> path;
  LeftFactors(rules, max_unroll).scan(s, path, out);
  return out;
}

LintReport lint(const Strategy& s, MinorMode mode, const RuleBook& rules) {
  LintReport out = detect_left_recursion(s, mode, rules);
  auto lf = detect_left_factors(s, rules);
  out.findings.insert(out.findings.end(), lf.findings.begin(), lf.findings.end());
  return out;
}

}  // namespace strategem
