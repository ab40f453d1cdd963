#pragma once

// Generic zipper over navigable terms.
//
// A term type T is navigable when the free functions
//   std::size_t arity(const T&)
//   T child(const T&, std::size_t)
//   T rebuild(const T&, std::size_t, T)
// are found by ADL, with rebuild(t, i, child(t, i)) == t.

#include <concepts>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace strategem {

template <typename T>
concept Navigable = std::copyable<T> && requires(const T& t, std::size_t i, T c) {
  { arity(t) } -> std::convertible_to<std::size_t>;
  { child(t, i) } -> std::convertible_to<T>;
  { rebuild(t, i, c) } -> std::convertible_to<T>;
};

using Location = std::vector<std::size_t>;

template <Navigable T>
class Zipper {
 public:
  struct Frame {
    T parent;  // parent as it was when we descended; child `index` is stale
    std::size_t index;
  };

  explicit Zipper(T root) : focus_(std::move(root)) {}

  const T& focus() const noexcept { return focus_; }
  const std::vector<Frame>& context() const noexcept { return context_; }
  bool at_root() const noexcept { return context_.empty(); }

  Location path() const {
    Location out;
    out.reserve(context_.size());
    for (const auto& f : context_) out.push_back(f.index);
    return out;
  }

  T unfocus() const {
    T cur = focus_;
    for (auto it = context_.rbegin(); it != context_.rend(); ++it)
      cur = rebuild(it->parent, it->index, std::move(cur));
    return cur;
  }

  Zipper with_focus(T replacement) const {
    Zipper z = *this;
    z.focus_ = std::move(replacement);
    return z;
  }

  std::optional<Zipper> up() const {
    if (context_.empty()) return std::nullopt;
    Zipper z = *this;
    Frame f = std::move(z.context_.back());
    z.context_.pop_back();
    z.focus_ = rebuild(f.parent, f.index, std::move(z.focus_));
    return z;
  }

  std::optional<Zipper> down(std::size_t i) const {
    if (i >= arity(focus_)) return std::nullopt;
    Zipper z = *this;
    z.context_.push_back(Frame{focus_, i});
    z.focus_ = child(focus_, i);
    return z;
  }

  std::optional<Zipper> left() const {
    if (context_.empty() || context_.back().index == 0) return std::nullopt;
    return sibling(context_.back().index - 1);
  }

  std::optional<Zipper> right() const {
    if (context_.empty()) return std::nullopt;
    const auto& f = context_.back();
    if (f.index + 1 >= arity(f.parent)) return std::nullopt;
    return sibling(f.index + 1);
  }

  Zipper to_root() const { return Zipper(unfocus()); }

  /// Follows `loc` from the current focus; nullopt if any index is out of range.
  std::optional<Zipper> descend(const Location& loc) const {
    std::optional<Zipper> z = *this;
    for (auto i : loc) {
      z = z->down(i);
      if (!z) return std::nullopt;
    }
    return z;
  }

 private:
  Zipper sibling(std::size_t j) const {
    Zipper z = *this;
    Frame& f = z.context_.back();
    f.parent = rebuild(f.parent, f.index, focus_);
    f.index = j;
    z.focus_ = child(f.parent, j);
    return z;
  }

  T focus_;
  std::vector<Frame> context_;
};

}  // namespace strategem
