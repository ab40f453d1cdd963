#include "strategem/powers.hpp"

#include <random>

#include "strategem/error.hpp"
#include "strategem/traversal.hpp"

namespace strategem {

namespace {

// a^x * a^y with syntactically equal bases: (a, x, y).
std::optional<std::tuple<Expr, Integer, Integer>> same_base_product(const Expr& e) {
  auto m = e.as_mul();
  if (!m) return std::nullopt;
  auto l = m->left.as_power();
  auto r = m->right.as_power();
  if (!l || !r || l->base != r->base) return std::nullopt;
  return std::make_tuple(l->base, l->exponent, r->exponent);
}

Expr invert(const Expr& e) {
  if (auto p = e.as_power()) return Expr::power(p->base, -p->exponent);
  if (auto r = e.as_recip()) return r->arg;
  if (auto m = e.as_mul()) return simplify_power(Expr::mul(invert(m->left), invert(m->right)));
  return Expr::recip(e);
}

}  // namespace

std::optional<Expr> add_exp(const Expr& e) {
  auto t = same_base_product(e);
  if (!t) return std::nullopt;
  auto& [a, x, y] = *t;
  return Expr::power(a, x + y);
}

std::optional<Expr> bug_add_exp(const Expr& e) {
  auto t = same_base_product(e);
  if (!t) return std::nullopt;
  auto& [a, x, y] = *t;
  return Expr::power(a, x * y);
}

std::optional<Expr> mul_exp(const Expr& e) {
  auto p = e.as_power();
  if (!p) return std::nullopt;
  auto inner = p->base.as_power();
  if (!inner) return std::nullopt;
  return Expr::power(inner->base, inner->exponent * p->exponent);
}

std::optional<Expr> dist_exp(const Expr& e) {
  auto p = e.as_power();
  if (!p) return std::nullopt;
  auto m = p->base.as_mul();
  if (!m) return std::nullopt;
  return Expr::mul(Expr::power(m->left, p->exponent), Expr::power(m->right, p->exponent));
}

std::optional<Expr> reci_exp(const Expr& e) {
  auto p = e.as_power();
  if (!p) return std::nullopt;
  return Expr::recip(Expr::power(p->base, -p->exponent));
}

RewriteRule rule_add_exp() { return lift(kAddExp, false, add_exp); }
RewriteRule rule_mul_exp() { return lift(kMulExp, false, mul_exp); }
RewriteRule rule_dist_exp() { return lift(kDistExp, false, dist_exp); }
RewriteRule rule_bug_add_exp() { return lift(kBugAddExp, false, bug_add_exp); }
RewriteRule rule_reci_exp() { return lift(kReciExp, false, reci_exp); }

Expr simplify_power(const Expr& e) {
  if (auto r = mul_exp(e)) return *r;
  if (auto r = add_exp(e)) return *r;
  if (auto r = dist_exp(e)) return *r;
  return e;
}

Expr norm_power(const Expr& e) {
  if (e.is_var()) return e;
  if (auto m = e.as_mul()) return simplify_power(Expr::mul(norm_power(m->left), norm_power(m->right)));
  if (auto p = e.as_power()) return simplify_power(Expr::power(norm_power(p->base), p->exponent));
  return invert(norm_power(e.as_recip()->arg));
}

bool eq_power(const Expr& a, const Expr& b) { return norm_power(a) == norm_power(b); }
bool sim_power(const Expr& a, const Expr& b) { return a == b; }
bool suitable_power(const Expr& e) { return norm_power(e) != e; }
bool ready_power(const Expr& e) { return norm_power(e) == e; }

Strategy write_as_power_of() {
  return label(kPowerLabel,
               repeat(bottom_up(choice(rule(kAddExp), choice(rule(kMulExp), rule(kDistExp))))));
}

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  return "easy";
}

Difficulty parse_difficulty(std::string_view text) {
  if (text == "easy") return Difficulty::Easy;
  if (text == "medium") return Difficulty::Medium;
  if (text == "hard") return Difficulty::Hard;
  throw Error(ErrorCode::InvalidArgument, "unknown difficulty '" + std::string(text) + "'");
}

std::size_t max_depth(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return 3;
    case Difficulty::Medium: return 5;
    case Difficulty::Hard: return 7;
  }
  return 3;
}

namespace {

// Derivation cost grows with term size much faster than with depth, so hard
// terms are also capped in node count to stay inside the default budget.
std::size_t max_nodes(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return 9;
    case Difficulty::Medium: return 21;
    case Difficulty::Hard: return 25;
  }
  return 9;
}

// mt19937_64 output is fixed by the standard; the distributions are not, so
// ranges are reduced by hand to keep outputs identical across platforms.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  bool coin() { return below(2) == 0; }
  Integer exponent() { return Integer(2 + below(8)); }

  // Two equal powers of a product side by side would let AddExp fire where
  // the normal form does not combine them, so at most one per expression.
  bool pair_used = false;

 private:
  std::mt19937_64 rng_;
};

// Terms that normalize to a single power of v:
//   C ::= v^n | C^n | C * v^n | C * C^n
Expr collapsible(Draw& d, const Expr& v, std::size_t depth) {
  if (depth < 3) return Expr::power(v, d.exponent());
  switch (d.below(3)) {
    case 0: return Expr::power(v, d.exponent());
    case 1: return Expr::power(collapsible(d, v, depth - 1), d.exponent());
    default: {
      Expr left = collapsible(d, v, depth - 1);
      Expr right = depth >= 4 && d.coin() ? Expr::power(collapsible(d, v, depth - 2), d.exponent())
                                          : Expr::power(v, d.exponent());
      return Expr::mul(std::move(left), std::move(right));
    }
  }
}

Expr pair_power(Draw& d, const Expr& a, const Expr& b) {
  d.pair_used = true;
  return d.coin() ? Expr::power(Expr::mul(a, b), d.exponent()) : Expr::power(Expr::mul(b, a), d.exponent());
}

// A right operand of a product is never itself a product.
Expr right_factor(Draw& d, const Expr& a, const Expr& b, std::size_t depth) {
  if (depth >= 3 && !d.pair_used && d.below(4) == 0) return pair_power(d, a, b);
  const Expr& v = d.coin() ? a : b;
  if (depth >= 3 && d.coin()) return Expr::power(collapsible(d, v, depth - 1), d.exponent());
  return Expr::power(v, d.exponent());
}

Expr product(Draw& d, const Expr& a, const Expr& b, std::size_t depth) {
  if (depth < 3 || d.below(3) != 0) {
    if (depth >= 3 && !d.pair_used && d.below(4) == 0) return pair_power(d, a, b);
    return collapsible(d, d.coin() ? a : b, depth);
  }
  Expr left = product(d, a, b, depth - 1);
  return Expr::mul(std::move(left), right_factor(d, a, b, depth - 1));
}

}  // namespace

Expr generate_power(Difficulty difficulty, std::uint64_t seed) {
  static const char* const kNames[] = {"a", "b", "x", "y"};
  Draw d(seed * 3 + static_cast<std::uint64_t>(difficulty));
  std::size_t i = d.below(4);
  std::size_t j = (i + 1 + d.below(3)) % 4;
  Expr a = Expr::var(kNames[i]);
  Expr b = Expr::var(kNames[j]);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    d.pair_used = false;
    Expr e = product(d, a, b, max_depth(difficulty));
    if (positions(e).size() <= max_nodes(difficulty) && suitable_power(e) && !ready_power(e)) return e;
  }
  throw Error(ErrorCode::InvalidState, "generator failed to find a suitable expression");
}

}  // namespace strategem
