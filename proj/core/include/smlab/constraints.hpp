#pragma once

#include <compare>
#include <span>
#include <vector>

#include "smlab/market.hpp"
#include "smlab/poset.hpp"

namespace smlab {

// "subject must precede at least one element of set". The set is sorted,
// nonempty, and does not contain the subject.
struct GeneralConstraint {
  int subject = 0;
  std::vector<int> set;

  auto operator<=>(const GeneralConstraint&) const = default;
};

// Validates and normalizes (sorts, dedupes). Throws InvalidConstraint.
GeneralConstraint make_constraint(int subject, std::vector<int> set);

// Constraints on orders of {0, ..., n-1}. Duplicates are rejected.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(int n) : n_(n) {}

  int size() const noexcept { return n_; }
  std::size_t count() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const std::vector<GeneralConstraint>& items() const noexcept { return items_; }

  // Returns false if the constraint is already present. Throws
  // IndexOutOfRange for elements outside the ground set.
  bool add(GeneralConstraint c);
  bool contains(const GeneralConstraint& c) const;

  // Pairwise constraints a < b for every closed relation of the poset.
  static ConstraintSet from_poset(const Poset& poset);
  // Chain constraints order[k] < order[k+1].
  static ConstraintSet from_order(std::span<const int> order, int n);

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

 private:
  int n_ = 0;
  std::vector<GeneralConstraint> items_;
};

// Whether the ranking satisfies every constraint. `order` must be a
// permutation of 0..n-1.
bool is_consistent(std::span<const int> order, const ConstraintSet& constraints);
bool satisfies(std::span<const int> position, const GeneralConstraint& c);

// Generalized topological sort, back to front: each step places the
// largest-index element that is the subject of no remaining constraint,
// then drops the constraints whose set contains it. Runs in O(n * |C|).
// Throws Infeasible when every remaining element is still a subject.
Ranking generalized_toposort(const ConstraintSet& constraints);

// Positions of each element in an order.
std::vector<int> positions(std::span<const int> order);

}  // namespace smlab
