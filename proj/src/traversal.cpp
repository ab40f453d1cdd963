#include "strategem/traversal.hpp"

namespace strategem {

namespace {

ExprZipper or_throw(std::optional<ExprZipper> z, const char* move) {
  if (!z) throw Error(ErrorCode::NotApplicable, std::string("cannot move ") + move);
  return std::move(*z);
}

// Arguments are closed, so reusing one binder name cannot capture anything.
const VarId kX = "x";

}  // namespace

ExprZipper nav_up(const ExprZipper& z) { return or_throw(z.up(), "up from the root"); }
ExprZipper nav_down(const ExprZipper& z, std::size_t i) {
  return or_throw(z.down(i), "down to a missing child");
}
ExprZipper nav_left(const ExprZipper& z) { return or_throw(z.left(), "left"); }
ExprZipper nav_right(const ExprZipper& z) { return or_throw(z.right(), "right"); }

Strategy downs() { return rule(kDowns); }

Strategy once(Strategy s) { return seq(downs(), seq(std::move(s), rule(kUp))); }

Strategy somewhere(Strategy s) {
  return rec(kX, choice(s, once(var(kX))));
}

Strategy bottom_up(Strategy s) {
  return rec(kX, orelse(once(var(kX)), s));
}

Strategy top_down(Strategy s) {
  return rec(kX, orelse(s, once(var(kX))));
}

}  // namespace strategem
