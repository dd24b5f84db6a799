#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "smlab/market.hpp"

namespace smlab {

using Mask = std::uint64_t;

inline constexpr int kMaxPosetSize = 64;

constexpr Mask bit(int i) noexcept { return Mask{1} << i; }
constexpr Mask full_mask(int n) noexcept { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

// Strict partial order on {0, ..., n-1}, stored transitively closed.
// a precedes b means a is ranked ahead of (preferred to) b.
class Poset {
 public:
  Poset() = default;
  // Throws TooLarge above kMaxPosetSize elements.
  explicit Poset(int n);

  // Throws CycleDetected if the relations contain a cycle.
  static Poset from_relations(int n, std::span<const std::pair<int, int>> precedes);
  // The chain order[0] < order[1] < ...
  static Poset chain(std::span<const int> order, int n);

  int size() const noexcept { return n_; }

  bool precedes(int a, int b) const noexcept { return (succ_[static_cast<std::size_t>(a)] >> b) & 1U; }
  bool comparable(int a, int b) const noexcept { return precedes(a, b) || precedes(b, a); }
  Mask successors(int a) const noexcept { return succ_[static_cast<std::size_t>(a)]; }
  Mask predecessors(int b) const noexcept { return pred_[static_cast<std::size_t>(b)]; }

  // Adds a < b and everything it implies. Returns false if already implied.
  // Throws CycleDetected if b < a already holds or a == b.
  bool add(int a, int b);

  // All closed relations (a, b), sorted.
  std::vector<std::pair<int, int>> relations() const;
  std::size_t relation_count() const noexcept;
  bool is_total() const noexcept;

  bool is_linear_extension(std::span<const int> order) const;

  friend bool operator==(const Poset&, const Poset&) = default;

 private:
  int n_ = 0;
  std::vector<Mask> succ_;
  std::vector<Mask> pred_;
};

// Linear extension built back to front: each step places, in the last free
// slot, the largest-index element with no successor among the unplaced
// ones. Agrees with generalized_toposort on the pairwise constraints.
Ranking linear_extension(const Poset& poset);

}  // namespace smlab
