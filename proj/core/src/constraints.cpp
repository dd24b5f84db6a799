#include "smlab/constraints.hpp"

#include <algorithm>
#include <string>

#include "smlab/error.hpp"

namespace smlab {

GeneralConstraint make_constraint(int subject, std::vector<int> set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (set.empty()) fail(ErrorCode::InvalidConstraint, "constraint set is empty");
  if (std::binary_search(set.begin(), set.end(), subject)) {
    fail(ErrorCode::InvalidConstraint, "subject " + std::to_string(subject) + " appears in its own set");
  }
  return {subject, std::move(set)};
}

bool ConstraintSet::add(GeneralConstraint c) {
  auto in_range = [this](int x) { return x >= 0 && x < n_; };
  if (!in_range(c.subject) || !std::all_of(c.set.begin(), c.set.end(), in_range)) {
    fail(ErrorCode::IndexOutOfRange, "constraint element outside ground set of size " + std::to_string(n_));
  }
  c = make_constraint(c.subject, std::move(c.set));
  if (contains(c)) return false;
  items_.push_back(std::move(c));
  return true;
}

bool ConstraintSet::contains(const GeneralConstraint& c) const {
  return std::find(items_.begin(), items_.end(), c) != items_.end();
}

ConstraintSet ConstraintSet::from_poset(const Poset& poset) {
  ConstraintSet cs(poset.size());
  for (auto [a, b] : poset.relations()) cs.add({a, {b}});
  return cs;
}

ConstraintSet ConstraintSet::from_order(std::span<const int> order, int n) {
  ConstraintSet cs(n);
  for (std::size_t i = 1; i < order.size(); ++i) cs.add({order[i - 1], {order[i]}});
  return cs;
}

std::vector<int> positions(std::span<const int> order) {
  std::vector<int> pos(order.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  return pos;
}

bool satisfies(std::span<const int> position, const GeneralConstraint& c) {
  const int px = position[static_cast<std::size_t>(c.subject)];
  return std::any_of(c.set.begin(), c.set.end(), [&](int s) { return position[static_cast<std::size_t>(s)] > px; });
}

bool is_consistent(std::span<const int> order, const ConstraintSet& constraints) {
  const auto pos = positions(order);
  return std::all_of(constraints.items().begin(), constraints.items().end(),
                     [&](const GeneralConstraint& c) { return satisfies(pos, c); });
}

Ranking generalized_toposort(const ConstraintSet& constraints) {
  const int n = constraints.size();
  const auto& items = constraints.items();

  std::vector<int> open_as_subject(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<std::size_t>> member_of(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < items.size(); ++k) {
    ++open_as_subject[static_cast<std::size_t>(items[k].subject)];
    for (int s : items[k].set) member_of[static_cast<std::size_t>(s)].push_back(k);
  }
  std::vector<char> removed(items.size(), 0);
  std::vector<char> placed(static_cast<std::size_t>(n), 0);

  Ranking order(static_cast<std::size_t>(n));
  for (int slot = n - 1; slot >= 0; --slot) {
    int pick = -1;
    for (int x = n - 1; x >= 0; --x) {
      if (!placed[static_cast<std::size_t>(x)] && open_as_subject[static_cast<std::size_t>(x)] == 0) {
        pick = x;
        break;
      }
    }
    if (pick < 0) fail(ErrorCode::Infeasible, "no order satisfies the constraints");
    placed[static_cast<std::size_t>(pick)] = 1;
    order[static_cast<std::size_t>(slot)] = pick;
    // Placing pick last among the rest satisfies every constraint naming it in S.
    for (std::size_t k : member_of[static_cast<std::size_t>(pick)]) {
      if (removed[k]) continue;
      removed[k] = 1;
      --open_as_subject[static_cast<std::size_t>(items[k].subject)];
    }
  }
  return order;
}

}  // namespace smlab
