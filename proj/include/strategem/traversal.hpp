#pragma once

// Navigation moves as direct calls, and the traversal combinators built on the
// Down/Up minor rules.

#include <cstddef>

#include "strategem/error.hpp"
#include "strategem/expr.hpp"
#include "strategem/semantics.hpp"
#include "strategem/strategy.hpp"

namespace strategem {

// Throw Error(NotApplicable) when the move does not exist.
ExprZipper nav_up(const ExprZipper& z);
ExprZipper nav_down(const ExprZipper& z, std::size_t i);
ExprZipper nav_left(const ExprZipper& z);
ExprZipper nav_right(const ExprZipper& z);

/// The Downs atom: one successor per child, ascending index.
Strategy downs();

Strategy once(Strategy s);       // Downs ; s ; Up
Strategy somewhere(Strategy s);  // mu x . s | once x
Strategy bottom_up(Strategy s);  // mu x . once x |> s
Strategy top_down(Strategy s);   // mu x . s |> once x

}  // namespace strategem
