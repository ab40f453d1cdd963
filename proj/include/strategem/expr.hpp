#pragma once

// Power expressions: e ::= v | e^n | e*e | 1/e

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "strategem/navigation.hpp"

namespace strategem {

using Integer = boost::multiprecision::cpp_int;

class Expr;

struct VarNode {
  std::string name;
};
struct PowerNode;
struct MulNode;
struct RecipNode;

/// Immutable, structurally shared expression tree.
class Expr {
 public:
  using Node = std::variant<VarNode, PowerNode, MulNode, RecipNode>;

  static Expr var(std::string name);
  static Expr power(Expr base, Integer exponent);
  static Expr mul(Expr left, Expr right);
  static Expr recip(Expr arg);

  const Node& node() const noexcept;

  bool is_var() const noexcept;
  bool is_power() const noexcept;
  bool is_mul() const noexcept;
  bool is_recip() const noexcept;

  const VarNode* as_var() const noexcept;
  const PowerNode* as_power() const noexcept;
  const MulNode* as_mul() const noexcept;
  const RecipNode* as_recip() const noexcept;

  /// Constructor levels; a variable has depth 1.
  std::size_t depth() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct PowerNode {
  Expr base;
  Integer exponent;
};
struct MulNode {
  Expr left;
  Expr right;
};
struct RecipNode {
  Expr arg;
};

inline const Expr::Node& Expr::node() const noexcept { return *node_; }

// Navigable contract.
std::size_t arity(const Expr& e);
Expr child(const Expr& e, std::size_t i);
Expr rebuild(const Expr& e, std::size_t i, Expr c);

using ExprZipper = Zipper<Expr>;

/// Canonical text: minimal parentheses, '*', '^', '1/' prefix, no whitespace.
std::string print(const Expr& e);

/// Parses canonical text. Throws Error(ParseError) with the offending position.
Expr parse_expr(std::string_view text);

/// Every position of `e`, preorder, children left to right.
std::vector<Location> positions(const Expr& e);

}  // namespace strategem
