#include "strategem/semantics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>

namespace strategem {

namespace {

std::string path_string(const Location& loc) {
  std::string out = "[";
  for (std::size_t i = 0; i < loc.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(loc[i]);
  }
  out += ']';
  return out;
}

// Cheap identity key for visited sets; strategies are keyed by structural hash.
std::string fast_key(const State& s) {
  std::string k = to_string(s.env);
  k += '\x1f';
  k += print(s.focus.unfocus());
  k += '\x1f';
  k += path_string(s.focus.path());
  k += '\x1f';
  k += std::to_string(s.remaining.hash());
  return k;
}

std::optional<std::string> parameter_of(const std::string& name, std::string_view head) {
  if (name.size() < head.size() + 2 || name.compare(0, head.size(), head) != 0) return std::nullopt;
  if (name[head.size()] != '(' || name.back() != ')') return std::nullopt;
  return name.substr(head.size() + 1, name.size() - head.size() - 2);
}

std::optional<std::size_t> parse_index(std::string_view text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

bool is_builtin(const RuleId& id) {
  const auto& n = id.name();
  return id == kUp || id == kDowns || id == kLeft || id == kRight || id == kDownSelected ||
         id == kAppCheck || parameter_of(n, "Down") || parameter_of(n, "Enter") ||
         parameter_of(n, "Leave");
}

std::vector<Focused> one(const Environment& env, std::optional<ExprZipper> z) {
  if (!z) return {};
  return {Focused{env, std::move(*z)}};
}

}  // namespace

std::string to_string(const Environment& env) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : env.bindings) {
    if (!first) out += ',';
    first = false;
    out += k;
    out += '=';
    out += v;
  }
  out += "}[";
  for (std::size_t i = 0; i < env.labels.size(); ++i) {
    if (i) out += ',';
    out += env.labels[i];
  }
  out += ']';
  return out;
}

RewriteRule lift(RuleId id, bool minor, std::function<std::optional<Expr>(const Expr&)> f) {
  RewriteRule r;
  r.id = std::move(id);
  r.minor = minor;
  r.focus_only = true;
  r.transform = [f = std::move(f)](const Environment& env, const ExprZipper& z) {
    std::vector<Focused> out;
    if (auto e = f(z.focus())) out.push_back(Focused{env, z.with_focus(std::move(*e))});
    return out;
  };
  return r;
}

RuleId down_to(std::size_t i) { return RuleId("Down(" + std::to_string(i) + ")"); }
RuleId enter(const LabelId& l) { return RuleId("Enter(" + l + ")"); }
RuleId leave(const LabelId& l) { return RuleId("Leave(" + l + ")"); }

RuleBook::RuleBook(std::vector<RewriteRule> rules) {
  for (auto& r : rules) add(std::move(r));
}

void RuleBook::add(RewriteRule r) {
  auto id = r.id;
  rules_.insert_or_assign(std::move(id), std::move(r));
}

bool RuleBook::contains(const RuleId& id) const { return is_builtin(id) || rules_.count(id) > 0; }

bool RuleBook::is_minor(const RuleId& id) const {
  if (auto it = rules_.find(id); it != rules_.end()) return it->second.minor;
  return is_builtin(id);
}

bool RuleBook::stays_below(const RuleId& id) const {
  if (auto it = rules_.find(id); it != rules_.end()) return it->second.focus_only;
  return id != kUp && id != kLeft && id != kRight;
}

const RewriteRule* RuleBook::find(const RuleId& id) const {
  auto it = rules_.find(id);
  return it == rules_.end() ? nullptr : &it->second;
}

std::vector<RuleId> RuleBook::user_rules() const {
  std::vector<RuleId> out;
  for (const auto& [id, r] : rules_) out.push_back(id);
  return out;
}

std::vector<Focused> RuleBook::apply(const RuleId& id, const Environment& env,
                                     const ExprZipper& z) const {
  if (auto it = rules_.find(id); it != rules_.end()) return it->second.transform(env, z);
  if (id == kUp) return one(env, z.up());
  if (id == kLeft) return one(env, z.left());
  if (id == kRight) return one(env, z.right());
  if (id == kDowns) {
    std::vector<Focused> out;
    for (std::size_t i = 0; i < arity(z.focus()); ++i) out.push_back(Focused{env, *z.down(i)});
    return out;
  }
  if (id == kDownSelected) {
    auto it = env.bindings.find(kChildKey);
    if (it == env.bindings.end()) return {};
    auto i = parse_index(it->second);
    return i ? one(env, z.down(*i)) : std::vector<Focused>{};
  }
  const auto& n = id.name();
  if (auto p = parameter_of(n, "Down")) {
    auto i = parse_index(*p);
    return i ? one(env, z.down(*i)) : std::vector<Focused>{};
  }
  if (auto l = parameter_of(n, "Enter")) {
    Environment e = env;
    e.labels.push_back(*l);
    return {Focused{std::move(e), z}};
  }
  if (auto l = parameter_of(n, "Leave")) {
    if (env.labels.empty() || env.labels.back() != *l) return {};
    Environment e = env;
    e.labels.pop_back();
    return {Focused{std::move(e), z}};
  }
  return {};
}

std::string state_key(const State& s) {
  std::string k = to_string(s.env);
  k += ' ';
  k += print(s.focus.unfocus());
  k += ' ';
  k += path_string(s.focus.path());
  k += ' ';
  k += print(s.remaining);
  return k;
}

bool same_state(const State& a, const State& b) {
  return a.env == b.env && a.focus.path() == b.focus.path() &&
         a.focus.unfocus() == b.focus.unfocus() && a.remaining == b.remaining;
}

Atom Atom::of_rule(RuleId id) {
  Atom a;
  a.key_ = id.name();
  a.rule_ = std::move(id);
  return a;
}

Atom Atom::of_check(Strategy s) {
  Atom a;
  a.key_ = "~(" + print(s) + ")";
  a.check_ = std::move(s);
  return a;
}

std::string to_string(const Sentence& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += s[i].key();
  }
  out += ']';
  return out;
}

StepBudget::StepBudget(std::size_t limit) : limit_(limit) {
  if (limit == 0) throw Error(ErrorCode::InvalidArgument, "step budget must be positive");
}

void StepBudget::charge(const std::vector<std::string>& partial) {
  if (++used_ > limit_)
    throw BudgetExceeded("step budget of " + std::to_string(limit_) + " transitions exceeded",
                         partial);
}

std::size_t default_budget() {
  if (const char* v = std::getenv("STRATEGEM_BUDGET")) {
    if (auto n = parse_index(v); n && *n > 0) return *n;
  }
  return StepBudget::kDefault;
}

namespace {

// Detects mu nodes revisited without consuming an atom. Standalone split
// reports that as left recursion; inside the engine the walk can never
// finish, so it surfaces as an exhausted budget.
struct SplitGuard {
  const std::vector<std::string>* trace = nullptr;  // set inside the engine
  std::vector<const void*> active;

  void enter(const Strategy& s) {
    if (std::find(active.begin(), active.end(), s.identity()) != active.end()) {
      if (trace) throw BudgetExceeded("unrolling " + print(s) + " never consumes an atom", *trace);
      throw Error(ErrorCode::LeftRecursion, "left-recursive strategy: split revisits " + print(s));
    }
    active.push_back(s.identity());
  }
  void leave() { active.pop_back(); }
};

void split_into(const Strategy& s, SplitGuard& g, std::vector<Split>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Rule>) {
          out.push_back(Split{Atom::of_rule(x.id), succeed()});
        } else if constexpr (std::is_same_v<T, Strategy::Check>) {
          out.push_back(Split{Atom::of_check(x.body), succeed()});
        } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
          std::vector<Split> head;
          split_into(x.first, g, head);
          for (auto& h : head) out.push_back(Split{std::move(h.atom), seq(h.rest, x.second)});
          if (nullable(x.first)) split_into(x.second, g, out);
        } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
          split_into(x.left, g, out);
          split_into(x.right, g, out);
        } else if constexpr (std::is_same_v<T, Strategy::Label>) {
          out.push_back(Split{Atom::of_rule(enter(x.label)), seq(x.body, rule(leave(x.label)))});
        } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
          g.enter(s);
          split_into(unroll(s), g, out);
          g.leave();
        }
      },
      s.node());
}

struct LanguageBuilder {
  std::size_t max_len;
  std::size_t node_budget;
  std::size_t nodes = 0;

  std::set<Sentence> build(const Strategy& s, std::size_t unroll_left) {
    if (++nodes > node_budget)
      throw BudgetExceeded("language enumeration exceeded node budget", {});
    std::set<Sentence> out;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Strategy::Rule>) {
            if (max_len >= 1) out.insert(Sentence{Atom::of_rule(x.id)});
          } else if constexpr (std::is_same_v<T, Strategy::Check>) {
            if (max_len >= 1) out.insert(Sentence{Atom::of_check(x.body)});
          } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
            auto a = build(x.first, unroll_left);
            if (a.empty()) return;
            auto b = build(x.second, unroll_left);
            for (const auto& u : a)
              for (const auto& v : b) {
                if (u.size() + v.size() > max_len) continue;
                Sentence w = u;
                w.insert(w.end(), v.begin(), v.end());
                out.insert(std::move(w));
              }
          } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
            out = build(x.left, unroll_left);
            auto b = build(x.right, unroll_left);
            out.insert(b.begin(), b.end());
          } else if constexpr (std::is_same_v<T, Strategy::Succeed>) {
            out.insert(Sentence{});
          } else if constexpr (std::is_same_v<T, Strategy::Label>) {
            if (max_len < 2) return;
            for (const auto& u : build(x.body, unroll_left)) {
              if (u.size() + 2 > max_len) continue;
              Sentence w{Atom::of_rule(enter(x.label))};
              w.insert(w.end(), u.begin(), u.end());
              w.push_back(Atom::of_rule(leave(x.label)));
              out.insert(std::move(w));
            }
          } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
            if (unroll_left > 0) out = build(unroll(s), unroll_left - 1);
          }
        },
        s.node());
    return out;
  }
};

bool minor_nullable(const Strategy& s, const RuleBook& rules) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Rule>) return rules.is_minor(x.id);
        else if constexpr (std::is_same_v<T, Strategy::Check>) return true;
        else if constexpr (std::is_same_v<T, Strategy::Seq>)
          return minor_nullable(x.first, rules) && minor_nullable(x.second, rules);
        else if constexpr (std::is_same_v<T, Strategy::Choice>)
          return minor_nullable(x.left, rules) || minor_nullable(x.right, rules);
        else if constexpr (std::is_same_v<T, Strategy::Succeed>) return true;
        else if constexpr (std::is_same_v<T, Strategy::Label> || std::is_same_v<T, Strategy::Rec>)
          return minor_nullable(x.body, rules);
        else return false;
      },
      s.node());
}

template <typename T, typename Key>
void sort_unique(std::vector<T>& v, Key key) {
  std::vector<std::pair<std::string, T>> keyed;
  keyed.reserve(v.size());
  for (auto& x : v) keyed.emplace_back(key(x), std::move(x));
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  v.clear();
  for (std::size_t i = 0; i < keyed.size(); ++i)
    if (i == 0 || keyed[i].first != keyed[i - 1].first) v.push_back(std::move(keyed[i].second));
}

State end_state(const State& s) { return State{s.env, s.focus, succeed()}; }

}  // namespace

std::vector<Split> split(const Strategy& s) {
  SplitGuard g;
  std::vector<Split> out;
  split_into(s, g, out);
  return out;
}

std::set<Sentence> language_upto(const Strategy& s, std::size_t max_len, std::size_t max_unroll,
                                 std::size_t node_budget) {
  LanguageBuilder b{max_len, node_budget};
  return b.build(s, max_unroll);
}

std::set<std::vector<RuleId>> major_language(const std::set<Sentence>& lang,
                                             const RuleBook& rules) {
  std::set<std::vector<RuleId>> out;
  for (const auto& s : lang) {
    std::vector<RuleId> majors;
    for (const auto& a : s)
      if (a.is_rule() && !rules.is_minor(a.rule())) majors.push_back(a.rule());
    out.insert(std::move(majors));
  }
  return out;
}

bool accepts_empty(const Strategy& s, const RuleBook& rules) { return minor_nullable(s, rules); }

void Engine::charge() { budget_.charge(trace_); }

// Divergent strategies can nest checks or minor chains without bound; stop
// well before the native stack runs out, whatever the budget says.
Engine::NestingGuard::NestingGuard(Engine& e) : engine(e) {
  if (++engine.nesting_ > kMaxNesting)
    throw BudgetExceeded("evaluation nested deeper than " + std::to_string(kMaxNesting), engine.trace_);
}
Engine::NestingGuard::~NestingGuard() { --engine.nesting_; }

std::vector<Split> Engine::split_charged(const Strategy& s) {
  SplitGuard g;
  g.trace = &trace_;
  std::vector<Split> out;
  split_into(s, g, out);
  return out;
}

std::vector<Transition> Engine::step(const State& s) {
  std::vector<Transition> out;
  for (auto& sp : split_charged(s.remaining)) {
    Strategy rest = simplify(sp.rest);
    if (sp.atom.is_rule()) {
      for (auto& f : rules_.apply(sp.atom.rule(), s.env, s.focus)) {
        charge();
        out.push_back(Transition{sp.atom.rule(), State{std::move(f.env), std::move(f.zipper), rest}});
      }
    } else if (!has_end_state(State{s.env, s.focus, sp.atom.check_body()})) {
      charge();
      out.push_back(Transition{kAppCheck, State{s.env, s.focus, rest}});
    }
  }
  // Duplicate successors (same rule, same state) collapse; order is the split order.
  std::vector<Transition> unique;
  std::unordered_set<std::string> seen;
  for (auto& t : out)
    if (seen.insert(t.rule.name() + '\x1e' + fast_key(t.state)).second) unique.push_back(std::move(t));
  return unique;
}

// A strategy is local when no run of it can move the focus above its
// starting point; then only the focused subterm matters to a check. The once
// pattern Down ; s ; Up is local whenever s is.
bool Engine::is_local(const Strategy& s) {
  if (auto it = local_memo_.find(s.hash()); it != local_memo_.end()) return it->second;
  bool out = std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Rule>) {
          return rules_.stays_below(x.id);
        } else if constexpr (std::is_same_v<T, Strategy::Check>) {
          return is_local(x.body);
        } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
          if (auto d = x.first.template as<Strategy::Rule>(); d && d->id == kDowns)
            if (auto inner = x.second.template as<Strategy::Seq>())
              if (auto up = inner->second.template as<Strategy::Rule>(); up && up->id == kUp)
                return is_local(inner->first);
          return is_local(x.first) && is_local(x.second);
        } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
          return is_local(x.left) && is_local(x.right);
        } else if constexpr (std::is_same_v<T, Strategy::Label>) {
          return is_local(x.body);
        } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
          return is_local(x.body);
        } else {
          // succeed, fail, and bound variables: a mu is local if its body
          // is, assuming the recursive calls are
          return true;
        }
      },
      s.node());
  local_memo_[s.hash()] = out;
  return out;
}

bool Engine::has_end_state(const State& start) {
  std::string memo_key = is_local(start.remaining)
                             ? "L" + to_string(start.env) + '\x1f' + print(start.focus.focus()) + '\x1f' +
                                   std::to_string(start.remaining.hash())
                             : fast_key(start);
  if (auto it = check_memo_.find(memo_key); it != check_memo_.end()) return it->second;
  charge();
  NestingGuard guard(*this);

  // Depth-first with checks deferred: a nested check is only evaluated once
  // every rule path pushed after it has failed to reach an end state.
  struct Item {
    State state;
    std::optional<Strategy> pending_check;
    std::size_t node;  // index into `tree`, for reporting the path on exhaustion
  };
  std::vector<std::pair<std::size_t, std::string>> tree{{0, ""}};
  bool found = false;
  std::unordered_set<std::string> visited{memo_key};
  std::vector<Item> stack{Item{start, std::nullopt, 0}};
  std::size_t at = 0;
  auto push = [&](State st, const std::string& rule) {
    if (!visited.insert(fast_key(st)).second) return;
    tree.emplace_back(at, rule);
    stack.push_back(Item{std::move(st), std::nullopt, tree.size() - 1});
  };
  try {
    while (!stack.empty() && !found) {
      Item cur = std::move(stack.back());
      stack.pop_back();
      at = cur.node;
      if (cur.pending_check) {
        if (!has_end_state(State{cur.state.env, cur.state.focus, *cur.pending_check})) {
          charge();
          push(std::move(cur.state), kAppCheck.name());
        }
        continue;
      }
      if (nullable(cur.state.remaining)) {
        found = true;
        break;
      }
      std::vector<std::pair<State, std::string>> rules_first;
      for (auto& sp : split_charged(cur.state.remaining)) {
        Strategy rest = simplify(sp.rest);
        if (sp.atom.is_rule()) {
          for (auto& f : rules_.apply(sp.atom.rule(), cur.state.env, cur.state.focus)) {
            charge();
            rules_first.emplace_back(State{std::move(f.env), std::move(f.zipper), rest}, sp.atom.rule().name());
          }
        } else {
          stack.push_back(Item{State{cur.state.env, cur.state.focus, rest}, sp.atom.check_body(), at});
        }
      }
      // Reversed so the first split alternative is explored first.
      for (auto it = rules_first.rbegin(); it != rules_first.rend(); ++it) push(std::move(it->first), it->second);
    }
  } catch (const BudgetExceeded& e) {
    // Splice this check's path in after the outer trace; enclosing checks
    // add theirs in front on the way out.
    std::vector<std::string> path;
    for (std::size_t n = at; n != 0; n = tree[n].first) path.push_back(tree[n].second);
    auto partial = e.partial_trace();
    auto pos = partial.begin() + static_cast<std::ptrdiff_t>(std::min(trace_.size(), partial.size()));
    partial.insert(pos, path.rbegin(), path.rend());
    throw BudgetExceeded(e.what(), std::move(partial));
  }
  check_memo_.emplace(std::move(memo_key), found);
  return found;
}

std::vector<MinorCompletion> Engine::minor_sentences(const State& start) {
  std::vector<MinorCompletion> out;
  std::unordered_set<std::string> visited;
  std::vector<RuleId> sentence;

  auto dfs = [&](auto&& self, const State& cur) -> void {
    if (!visited.insert(fast_key(cur)).second) return;
    NestingGuard guard(*this);
    if (nullable(cur.remaining)) out.push_back(MinorCompletion{sentence, cur});
    for (auto& t : step(cur)) {
      if (!rules_.is_minor(t.rule)) continue;
      sentence.push_back(t.rule);
      trace_.push_back(t.rule.name());
      self(self, t.state);
      trace_.pop_back();
      sentence.pop_back();
    }
  };
  dfs(dfs, start);
  return out;
}

bool Engine::major_reachable(const State& start) {
  std::unordered_set<std::string> visited;
  std::vector<State> stack{start};
  visited.insert(fast_key(start));
  while (!stack.empty()) {
    State cur = std::move(stack.back());
    stack.pop_back();
    for (auto& t : step(cur)) {
      if (!rules_.is_minor(t.rule)) return true;
      if (visited.insert(fast_key(t.state)).second) stack.push_back(std::move(t.state));
    }
  }
  return false;
}

std::vector<BigStep> Engine::big_step(const State& start) {
  std::vector<BigStep> out;
  std::unordered_set<std::string> visited;
  std::unordered_set<std::string> emitted;
  std::vector<RuleId> prefix;

  auto emit = [&](const RuleId& r, const Location& loc, const State& st, std::vector<RuleId> trace) {
    if (emitted.insert(r.name() + '\x1e' + fast_key(st)).second)
      out.push_back(BigStep{r, loc, st, std::move(trace)});
  };

  auto dfs = [&](auto&& self, const State& cur) -> void {
    if (!visited.insert(fast_key(cur)).second) return;
    NestingGuard guard(*this);
    for (auto& t : step(cur)) {
      if (rules_.is_minor(t.rule)) {
        prefix.push_back(t.rule);
        trace_.push_back(t.rule.name());
        self(self, t.state);
        trace_.pop_back();
        prefix.pop_back();
        continue;
      }
      Location loc = cur.focus.path();
      std::vector<RuleId> base = prefix;
      base.push_back(t.rule);
      trace_.push_back(t.rule.name());
      auto completions = minor_sentences(t.state);
      if (completions.empty()) {
        emit(t.rule, loc, t.state, base);
      } else {
        for (auto& c : completions) {
          auto full = base;
          full.insert(full.end(), c.sentence.begin(), c.sentence.end());
          emit(t.rule, loc, c.state, std::move(full));
        }
        if (major_reachable(t.state)) emit(t.rule, loc, t.state, base);
      }
      trace_.pop_back();
    }
  };
  dfs(dfs, start);
  return out;
}

std::vector<State> Engine::run(const State& start) {
  std::vector<State> ends;
  std::unordered_set<std::string> visited{fast_key(start)};
  std::deque<State> queue{start};
  while (!queue.empty()) {
    State cur = std::move(queue.front());
    queue.pop_front();
    for (auto& c : minor_sentences(cur)) ends.push_back(end_state(c.state));
    for (auto& b : big_step(cur))
      if (visited.insert(fast_key(b.state)).second) queue.push_back(std::move(b.state));
  }
  sort_unique(ends, [](const State& s) { return state_key(s); });
  return ends;
}

std::vector<State> Engine::step_closure_end_states(const State& start) {
  std::vector<State> ends;
  std::unordered_set<std::string> visited{fast_key(start)};
  std::deque<State> queue{start};
  while (!queue.empty()) {
    State cur = std::move(queue.front());
    queue.pop_front();
    if (nullable(cur.remaining)) ends.push_back(end_state(cur));
    for (auto& t : step(cur))
      if (visited.insert(fast_key(t.state)).second) queue.push_back(std::move(t.state));
  }
  sort_unique(ends, [](const State& s) { return state_key(s); });
  return ends;
}

bool Engine::recognize(const std::vector<RuleId>& majors, const State& start) {
  // Depth-first: the question is existential, so stop at the first path.
  std::unordered_set<std::string> failed;
  auto dfs = [&](auto&& self, const State& cur, std::size_t i) -> bool {
    if (i == majors.size()) return !minor_sentences(cur).empty();
    std::string key = std::to_string(i) + '\x1e' + fast_key(cur);
    if (failed.count(key)) return false;
    for (auto& b : big_step(cur))
      if (b.rule == majors[i] && self(self, b.state, i + 1)) return true;
    failed.insert(std::move(key));
    return false;
  };
  return dfs(dfs, start, 0);
}

}  // namespace strategem
