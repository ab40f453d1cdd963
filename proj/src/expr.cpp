#include "strategem/expr.hpp"

#include <cctype>

#include "strategem/error.hpp"

namespace strategem {

Expr Expr::var(std::string name) {
  return Expr(std::make_shared<const Node>(VarNode{std::move(name)}));
}
Expr Expr::power(Expr base, Integer exponent) {
  return Expr(std::make_shared<const Node>(PowerNode{std::move(base), std::move(exponent)}));
}
Expr Expr::mul(Expr left, Expr right) {
  return Expr(std::make_shared<const Node>(MulNode{std::move(left), std::move(right)}));
}
Expr Expr::recip(Expr arg) {
  return Expr(std::make_shared<const Node>(RecipNode{std::move(arg)}));
}

bool Expr::is_var() const noexcept { return std::holds_alternative<VarNode>(*node_); }
bool Expr::is_power() const noexcept { return std::holds_alternative<PowerNode>(*node_); }
bool Expr::is_mul() const noexcept { return std::holds_alternative<MulNode>(*node_); }
bool Expr::is_recip() const noexcept { return std::holds_alternative<RecipNode>(*node_); }

const VarNode* Expr::as_var() const noexcept { return std::get_if<VarNode>(node_.get()); }
const PowerNode* Expr::as_power() const noexcept { return std::get_if<PowerNode>(node_.get()); }
const MulNode* Expr::as_mul() const noexcept { return std::get_if<MulNode>(node_.get()); }
const RecipNode* Expr::as_recip() const noexcept { return std::get_if<RecipNode>(node_.get()); }

std::size_t Expr::depth() const {
  std::size_t below = 0;
  for (std::size_t i = 0; i < arity(*this); ++i) below = std::max(below, child(*this, i).depth());
  return below + 1;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  if (auto v = a.as_var()) return v->name == b.as_var()->name;
  if (auto p = a.as_power()) {
    auto q = b.as_power();
    return p->exponent == q->exponent && p->base == q->base;
  }
  if (auto m = a.as_mul()) {
    auto n = b.as_mul();
    return m->left == n->left && m->right == n->right;
  }
  return a.as_recip()->arg == b.as_recip()->arg;
}

std::size_t arity(const Expr& e) {
  switch (e.node().index()) {
    case 0: return 0;
    case 2: return 2;
    default: return 1;
  }
}

Expr child(const Expr& e, std::size_t i) {
  if (auto p = e.as_power()) return p->base;
  if (auto r = e.as_recip()) return r->arg;
  auto m = e.as_mul();
  return i == 0 ? m->left : m->right;
}

Expr rebuild(const Expr& e, std::size_t i, Expr c) {
  if (auto p = e.as_power()) return Expr::power(std::move(c), p->exponent);
  if (e.is_recip()) return Expr::recip(std::move(c));
  auto m = e.as_mul();
  return i == 0 ? Expr::mul(std::move(c), m->right) : Expr::mul(m->left, std::move(c));
}

namespace {

void print_expr(const Expr& e, std::string& out);

void print_parenthesized(const Expr& e, std::string& out) {
  out += '(';
  print_expr(e, out);
  out += ')';
}

void print_term(const Expr& e, std::string& out) {
  if (auto v = e.as_var()) {
    out += v->name;
  } else if (auto p = e.as_power()) {
    if (p->base.is_var())
      out += p->base.as_var()->name;
    else
      print_parenthesized(p->base, out);
    out += '^';
    out += p->exponent.str();
  } else if (auto r = e.as_recip()) {
    out += "1/";
    if (r->arg.is_mul())
      print_parenthesized(r->arg, out);
    else
      print_term(r->arg, out);
  } else {
    print_parenthesized(e, out);
  }
}

void print_expr(const Expr& e, std::string& out) {
  if (auto m = e.as_mul()) {
    print_expr(m->left, out);
    out += '*';
    print_term(m->right, out);
  } else {
    print_term(e, out);
  }
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  Expr expr() {
    Expr e = term();
    while (accept('*')) e = Expr::mul(std::move(e), term());
    return e;
  }

  Expr term() {
    Expr f = factor();
    if (accept('^')) f = Expr::power(std::move(f), integer());
    return f;
  }

  Expr factor() {
    skip_ws();
    if (pos_ + 1 < text_.size() && text_[pos_] == '1' && text_[pos_ + 1] == '/') {
      pos_ += 2;
      return Expr::recip(term());
    }
    if (accept('(')) {
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::islower(static_cast<unsigned char>(text_[pos_])) ||
                                     std::isdigit(static_cast<unsigned char>(text_[pos_]))))
        ++pos_;
      return Expr::var(std::string(text_.substr(start, pos_ - start)));
    }
    fail(pos_ < text_.size() ? "expected expression" : "unexpected end of input");
  }

  Integer integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected integer exponent");
    return Integer(std::string(text_.substr(start, pos_ - start)));
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
                "expression syntax error at position " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_positions(const Expr& e, Location& prefix, std::vector<Location>& out) {
  out.push_back(prefix);
  for (std::size_t i = 0; i < arity(e); ++i) {
    prefix.push_back(i);
    collect_positions(child(e, i), prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

Expr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

std::vector<Location> positions(const Expr& e) {
  std::vector<Location> out;
  Location prefix;
  collect_positions(e, prefix, out);
  return out;
}

}  // namespace strategem
