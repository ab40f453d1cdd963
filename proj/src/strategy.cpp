#include "strategem/strategy.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <vector>

#include "strategem/error.hpp"
#include "strategem/traversal.hpp"

namespace strategem {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// FNV-1a, so hashes do not depend on the standard library.
std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

std::uint64_t node_hash(const Strategy::Node& n) {
  std::uint64_t h = mix(0x51ed27, n.index());
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Rule>) {
          h = mix(h, hash_string(x.id.name()));
        } else if constexpr (std::is_same_v<T, Strategy::Check>) {
          h = mix(h, x.body.hash());
        } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
          h = mix(mix(h, x.first.hash()), x.second.hash());
        } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
          h = mix(mix(h, x.left.hash()), x.right.hash());
        } else if constexpr (std::is_same_v<T, Strategy::Label>) {
          h = mix(mix(h, hash_string(x.label)), x.body.hash());
        } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
          h = mix(mix(h, hash_string(x.var)), x.body.hash());
        } else if constexpr (std::is_same_v<T, Strategy::Var>) {
          h = mix(h, hash_string(x.name));
        }
      },
      n);
  return h;
}

}  // namespace

Strategy make_strategy(Strategy::Node n) {
  auto h = node_hash(n);
  return Strategy(std::make_shared<const Strategy::Node>(std::move(n)), h);
}

bool operator==(const Strategy& a, const Strategy& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash_ != b.hash_ || a.node_->index() != b.node_->index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, Strategy::Rule>) return x.id == y.id;
        else if constexpr (std::is_same_v<T, Strategy::Check>) return x.body == y.body;
        else if constexpr (std::is_same_v<T, Strategy::Seq>)
          return x.first == y.first && x.second == y.second;
        else if constexpr (std::is_same_v<T, Strategy::Choice>)
          return x.left == y.left && x.right == y.right;
        else if constexpr (std::is_same_v<T, Strategy::Label>)
          return x.label == y.label && x.body == y.body;
        else if constexpr (std::is_same_v<T, Strategy::Rec>)
          return x.var == y.var && x.body == y.body;
        else if constexpr (std::is_same_v<T, Strategy::Var>) return x.name == y.name;
        else return true;
      },
      *a.node_);
}

Strategy rule(RuleId id) { return make_strategy(Strategy::Rule{std::move(id)}); }
Strategy rule(std::string_view name) { return rule(RuleId(std::string(name))); }
Strategy check(Strategy s) { return make_strategy(Strategy::Check{std::move(s)}); }
Strategy seq(Strategy a, Strategy b) {
  return make_strategy(Strategy::Seq{std::move(a), std::move(b)});
}
Strategy choice(Strategy a, Strategy b) {
  return make_strategy(Strategy::Choice{std::move(a), std::move(b)});
}
Strategy succeed() {
  static const Strategy s = make_strategy(Strategy::Succeed{});
  return s;
}
Strategy fail() {
  static const Strategy s = make_strategy(Strategy::Fail{});
  return s;
}
Strategy label(LabelId l, Strategy s) {
  return make_strategy(Strategy::Label{std::move(l), std::move(s)});
}
Strategy rec(VarId v, Strategy body) {
  return make_strategy(Strategy::Rec{std::move(v), std::move(body)});
}
Strategy var(VarId v) { return make_strategy(Strategy::Var{std::move(v)}); }

Strategy orelse(Strategy a, Strategy b) { return choice(a, seq(check(a), std::move(b))); }
Strategy option(Strategy s) { return choice(std::move(s), succeed()); }
Strategy try_(Strategy s) { return orelse(std::move(s), succeed()); }
Strategy repeat(Strategy s) { return rec("x", try_(seq(std::move(s), var("x")))); }

Strategy substitute(const Strategy& s, const VarId& v, const Strategy& replacement) {
  if (auto x = s.as<Strategy::Var>()) return x->name == v ? replacement : s;
  if (auto c = s.as<Strategy::Check>()) {
    auto b = substitute(c->body, v, replacement);
    return b.identity() == c->body.identity() ? s : check(std::move(b));
  }
  if (auto q = s.as<Strategy::Seq>()) {
    auto a = substitute(q->first, v, replacement);
    auto b = substitute(q->second, v, replacement);
    if (a.identity() == q->first.identity() && b.identity() == q->second.identity()) return s;
    return seq(std::move(a), std::move(b));
  }
  if (auto c = s.as<Strategy::Choice>()) {
    auto a = substitute(c->left, v, replacement);
    auto b = substitute(c->right, v, replacement);
    if (a.identity() == c->left.identity() && b.identity() == c->right.identity()) return s;
    return choice(std::move(a), std::move(b));
  }
  if (auto l = s.as<Strategy::Label>()) {
    auto b = substitute(l->body, v, replacement);
    return b.identity() == l->body.identity() ? s : label(l->label, std::move(b));
  }
  if (auto r = s.as<Strategy::Rec>()) {
    if (r->var == v) return s;  // shadowed
    auto b = substitute(r->body, v, replacement);
    return b.identity() == r->body.identity() ? s : rec(r->var, std::move(b));
  }
  return s;
}

Strategy unroll(const Strategy& s) {
  auto r = s.as<Strategy::Rec>();
  if (!r) return s;
  return substitute(r->body, r->var, s);
}

Strategy simplify(const Strategy& s) {
  if (auto q = s.as<Strategy::Seq>()) {
    auto a = simplify(q->first);
    auto b = simplify(q->second);
    if (a.is<Strategy::Fail>()) return a;
    if (a.is<Strategy::Succeed>()) return b;
    if (b.is<Strategy::Succeed>()) return a;
    if (a.identity() == q->first.identity() && b.identity() == q->second.identity()) return s;
    return seq(std::move(a), std::move(b));
  }
  if (auto c = s.as<Strategy::Choice>()) {
    auto a = simplify(c->left);
    auto b = simplify(c->right);
    if (a.is<Strategy::Fail>()) return b;
    if (b.is<Strategy::Fail>()) return a;
    if (a.identity() == c->left.identity() && b.identity() == c->right.identity()) return s;
    return choice(std::move(a), std::move(b));
  }
  return s;
}

namespace {

// Least fixpoint: a bound variable is assumed non-nullable.
bool nullable_in(const Strategy& s) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Seq>)
          return nullable_in(x.first) && nullable_in(x.second);
        else if constexpr (std::is_same_v<T, Strategy::Choice>)
          return nullable_in(x.left) || nullable_in(x.right);
        else if constexpr (std::is_same_v<T, Strategy::Succeed>) return true;
        else if constexpr (std::is_same_v<T, Strategy::Rec>) return nullable_in(x.body);
        else return false;
      },
      s.node());
}

void free_vars(const Strategy& s, std::vector<VarId>& bound, std::set<VarId>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Var>) {
          if (std::find(bound.begin(), bound.end(), x.name) == bound.end()) out.insert(x.name);
        } else if constexpr (std::is_same_v<T, Strategy::Check>) {
          free_vars(x.body, bound, out);
        } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
          free_vars(x.first, bound, out);
          free_vars(x.second, bound, out);
        } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
          free_vars(x.left, bound, out);
          free_vars(x.right, bound, out);
        } else if constexpr (std::is_same_v<T, Strategy::Label>) {
          free_vars(x.body, bound, out);
        } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
          bound.push_back(x.var);
          free_vars(x.body, bound, out);
          bound.pop_back();
        }
      },
      s.node());
}

void collect_rules(const Strategy& s, std::set<RuleId>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Rule>) {
          out.insert(x.id);
        } else if constexpr (std::is_same_v<T, Strategy::Check> ||
                             std::is_same_v<T, Strategy::Label> ||
                             std::is_same_v<T, Strategy::Rec>) {
          collect_rules(x.body, out);
        } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
          collect_rules(x.first, out);
          collect_rules(x.second, out);
        } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
          collect_rules(x.left, out);
          collect_rules(x.right, out);
        }
      },
      s.node());
}

// Printing precedence: 0 choice, 1 sequence, 2 check, 3 atom.
// Labels and mu extend to the right, so they are parenthesized as operands.
int level(const Strategy& s) {
  if (s.is<Strategy::Choice>() || s.is<Strategy::Label>() || s.is<Strategy::Rec>()) return 0;
  if (s.is<Strategy::Seq>()) return 1;
  if (s.is<Strategy::Check>()) return 2;
  return 3;
}

void print_to(const Strategy& s, std::string& out);

void print_operand(const Strategy& s, int min_level, std::string& out) {
  bool parens = level(s) < min_level || s.is<Strategy::Label>() || s.is<Strategy::Rec>();
  if (parens) out += '(';
  print_to(s, out);
  if (parens) out += ')';
}

void print_to(const Strategy& s, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Strategy::Rule>) {
          out += x.id.name();
        } else if constexpr (std::is_same_v<T, Strategy::Check>) {
          out += '~';
          print_operand(x.body, 2, out);
        } else if constexpr (std::is_same_v<T, Strategy::Seq>) {
          print_operand(x.first, 2, out);
          out += " ; ";
          print_operand(x.second, 1, out);
        } else if constexpr (std::is_same_v<T, Strategy::Choice>) {
          print_operand(x.left, 1, out);
          out += " | ";
          print_operand(x.right, 0, out);
        } else if constexpr (std::is_same_v<T, Strategy::Succeed>) {
          out += "succeed";
        } else if constexpr (std::is_same_v<T, Strategy::Fail>) {
          out += "fail";
        } else if constexpr (std::is_same_v<T, Strategy::Label>) {
          out += x.label;
          out += ": ";
          print_to(x.body, out);
        } else if constexpr (std::is_same_v<T, Strategy::Rec>) {
          out += "mu ";
          out += x.var;
          out += " . ";
          print_to(x.body, out);
        } else if constexpr (std::is_same_v<T, Strategy::Var>) {
          out += x.name;
        }
      },
      s.node());
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Call syntax for the derived combinators; they parse to their desugaring.
std::function<Strategy(Strategy)> derived_combinator(const std::string& name) {
  static const std::map<std::string, Strategy (*)(Strategy)> table{
      {"repeat", repeat}, {"try", try_},           {"option", option},     {"once", once},
      {"somewhere", somewhere}, {"bottomUp", bottom_up}, {"topDown", top_down}};
  auto it = table.find(name);
  if (it == table.end()) return {};
  return it->second;
}

class StrategyParser {
 public:
  explicit StrategyParser(std::string_view text) : text_(text) {}

  Strategy parse() {
    Strategy s = parse_choice();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return s;
  }

 private:
  Strategy parse_choice() {
    Strategy a = parse_seq();
    if (accept('|')) return choice(std::move(a), parse_choice());
    return a;
  }

  Strategy parse_seq() {
    Strategy a = parse_unary();
    if (accept(';')) return seq(std::move(a), parse_seq());
    return a;
  }

  Strategy parse_unary() {
    if (accept('~')) return check(parse_unary());
    return parse_atom();
  }

  Strategy parse_atom() {
    if (accept('(')) {
      Strategy s = parse_choice();
      if (!accept(')')) fail("expected ')'");
      return s;
    }
    std::string name = identifier();
    if (name == "succeed") return succeed();
    if (name == "fail") return strategem::fail();
    if (name == "mu") {
      std::string v = identifier();
      if (!accept('.')) fail("expected '.' after mu binder");
      bound_.push_back(v);
      Strategy body = parse_choice();
      bound_.pop_back();
      return rec(v, std::move(body));
    }
    if (auto derived = derived_combinator(name); derived && pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      Strategy arg = parse_choice();
      if (!accept(')')) fail("expected ')' after " + name + " argument");
      return derived(std::move(arg));
    }
    // Rule names may carry a parameter, e.g. Enter(l) or Down(0).
    if (pos_ < text_.size() && text_[pos_] == '(') {
      std::size_t close = text_.find(')', pos_);
      if (close == std::string_view::npos) fail("unterminated rule parameter");
      std::string_view param = text_.substr(pos_ + 1, close - pos_ - 1);
      for (char c : param)
        if (!ident_char(c)) fail("invalid rule parameter");
      name += text_.substr(pos_, close - pos_ + 1);
      pos_ = close + 1;
      return rule(name);
    }
    if (accept(':')) return label(name, parse_choice());
    if (std::find(bound_.begin(), bound_.end(), name) != bound_.end()) return var(name);
    return rule(name);
  }

  std::string identifier() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_]))
      fail(pos_ < text_.size() ? "expected identifier" : "unexpected end of input");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "strategy syntax error at position " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

bool nullable(const Strategy& s) { return nullable_in(s); }

bool is_closed(const Strategy& s) {
  std::vector<VarId> bound;
  std::set<VarId> out;
  free_vars(s, bound, out);
  return out.empty();
}

std::set<RuleId> rules_in(const Strategy& s) {
  std::set<RuleId> out;
  collect_rules(s, out);
  return out;
}

std::string print(const Strategy& s) {
  std::string out;
  print_to(s, out);
  return out;
}

Strategy parse_strategy(std::string_view text) { return StrategyParser(text).parse(); }

}  // namespace strategem
