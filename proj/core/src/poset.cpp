#include "smlab/poset.hpp"

#include <bit>
#include <string>

#include "smlab/error.hpp"

namespace smlab {

Poset::Poset(int n) : n_(n) {
  if (n < 0 || n > kMaxPosetSize) fail(ErrorCode::TooLarge, "poset size " + std::to_string(n));
  succ_.assign(static_cast<std::size_t>(n), 0);
  pred_.assign(static_cast<std::size_t>(n), 0);
}

Poset Poset::from_relations(int n, std::span<const std::pair<int, int>> precedes) {
  Poset p(n);
  for (auto [a, b] : precedes) p.add(a, b);
  return p;
}

Poset Poset::chain(std::span<const int> order, int n) {
  Poset p(n);
  for (std::size_t i = 1; i < order.size(); ++i) p.add(order[i - 1], order[i]);
  return p;
}

bool Poset::add(int a, int b) {
  if (a < 0 || a >= n_ || b < 0 || b >= n_) fail(ErrorCode::IndexOutOfRange, "poset element out of range");
  if (a == b || precedes(b, a)) {
    fail(ErrorCode::CycleDetected, "relation " + std::to_string(a) + "<" + std::to_string(b) + " closes a cycle");
  }
  if (precedes(a, b)) return false;
  const Mask below = pred_[static_cast<std::size_t>(a)] | bit(a);
  const Mask above = succ_[static_cast<std::size_t>(b)] | bit(b);
  for (Mask m = below; m != 0; m &= m - 1) succ_[static_cast<std::size_t>(std::countr_zero(m))] |= above;
  for (Mask m = above; m != 0; m &= m - 1) pred_[static_cast<std::size_t>(std::countr_zero(m))] |= below;
  return true;
}

std::vector<std::pair<int, int>> Poset::relations() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n_; ++a) {
    for (Mask m = succ_[static_cast<std::size_t>(a)]; m != 0; m &= m - 1) out.emplace_back(a, std::countr_zero(m));
  }
  return out;
}

std::size_t Poset::relation_count() const noexcept {
  std::size_t c = 0;
  for (Mask m : succ_) c += static_cast<std::size_t>(std::popcount(m));
  return c;
}

bool Poset::is_total() const noexcept {
  if (n_ <= 1) return true;
  return relation_count() == static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ - 1) / 2;
}

bool Poset::is_linear_extension(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != n_) return false;
  Mask seen = 0;
  for (int x : order) {
    if (x < 0 || x >= n_ || (seen & bit(x))) return false;
    // Every predecessor must already be placed.
    if ((pred_[static_cast<std::size_t>(x)] & ~seen) != 0) return false;
    seen |= bit(x);
  }
  return true;
}

Ranking linear_extension(const Poset& poset) {
  const int n = poset.size();
  Ranking order(static_cast<std::size_t>(n));
  Mask remaining = full_mask(n);
  for (int slot = n - 1; slot >= 0; --slot) {
    int pick = -1;
    for (Mask m = remaining; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if ((poset.successors(x) & remaining) == 0) pick = x;
    }
    order[static_cast<std::size_t>(slot)] = pick;
    remaining &= ~bit(pick);
  }
  return order;
}

}  // namespace smlab
