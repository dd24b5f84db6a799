#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "smlab/constraints.hpp"
#include "smlab/poset.hpp"

namespace smlab {

using ExtensionCount = boost::multiprecision::cpp_int;
using Fraction = boost::multiprecision::cpp_rational;

// Subset tables below store counts in 64 bits; n! fits for n <= 20.
inline constexpr int kHardEnumerationLimit = 20;
inline constexpr int kDefaultPosetCap = 18;
inline constexpr int kDefaultGeneralCap = 9;
inline constexpr int kDefaultMixedCap = 9;

struct EnumerationCaps {
  int poset = kDefaultPosetCap;
  int general = kDefaultGeneralCap;
  int mixed = kDefaultMixedCap;
};

// Reads SMLAB_ENUM_CAP: either a single integer applied to every cap, or a
// comma list such as "poset=16,general=8". Throws ConfigError when malformed.
EnumerationCaps caps_from_env();
EnumerationCaps parse_caps(std::string_view text);

// Exact decimal such as "0.85" as a rational. Throws ConfigError.
Fraction parse_decimal(std::string_view text);
double to_double(const Fraction& f);

// Forward counts over the down-sets of a poset: entry S is the number of
// linear extensions of the sub-poset induced on down-set S (zero when S is
// not a down-set).
class DownsetTable {
 public:
  // Throws TooLarge above min(cap, kHardEnumerationLimit) elements.
  DownsetTable(const Poset& poset, int cap);

  const Poset& poset() const noexcept { return *poset_; }
  std::uint64_t total() const noexcept { return forward_.back(); }
  std::uint64_t at(Mask downset) const noexcept { return forward_[static_cast<std::size_t>(downset)]; }
  const std::vector<std::uint64_t>& counts() const noexcept { return forward_; }

 private:
  const Poset* poset_;
  std::vector<std::uint64_t> forward_;
};

ExtensionCount count_extensions_poset(const Poset& poset, int cap = kDefaultPosetCap);

// For every ordered pair (a, b), the number of linear extensions that rank a
// ahead of b. Computed in one pass over down-sets.
struct PairwiseCounts {
  int n = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> before;

  std::uint64_t at(int a, int b) const { return before[static_cast<std::size_t>(a * n + b)]; }
};

PairwiseCounts pairwise_counts(const Poset& poset, int cap = kDefaultPosetCap);

// Fraction of linear extensions with a ahead of b; 0 when b < a is forced.
Fraction pref_frac(const Poset& poset, int a, int b, int cap = kDefaultPosetCap);

// Order respecting every pair (a, b) whose preference fraction is at least
// alpha. Throws AlphaTooSmall below 4/5 and CycleDetected if those pairs
// ever form a cycle.
Ranking representative_order_exact(const Poset& poset, const Fraction& alpha, int cap = kDefaultPosetCap);

// Pairs (a, b) with pref_frac(a, b) >= alpha.
std::vector<std::pair<int, int>> representative_pairs(const PairwiseCounts& counts, const Fraction& alpha);

// Number of permutations consistent with general constraints, computed by a
// dynamic program over the set of already-placed elements.
ExtensionCount count_consistent_general(const ConstraintSet& constraints, int cap = kDefaultGeneralCap);

// Fraction of consistent orders that rank `a` last among `remaining`.
// Throws NoConsistentOrder if nothing is consistent.
Fraction last_frac(const ConstraintSet& constraints, std::span<const int> remaining, int a,
                   int cap = kDefaultGeneralCap);

// Prefix / completion tables for general constraints, shared by counting,
// last-fraction queries and exact uniform sampling of consistent orders.
class ConsistentOrderTable {
 public:
  ConsistentOrderTable(const ConstraintSet& constraints, int cap);

  int size() const noexcept { return n_; }
  std::uint64_t total() const noexcept { return prefix_.back(); }

  // Whether x may be placed right after the elements of `placed`.
  bool allowed(int x, Mask placed) const;

  // Number of consistent orders that rank a last among `remaining`.
  std::uint64_t last_count(Mask remaining, int a) const;

  // Uniform consistent order (most preferred first). Requires total() > 0.
  template <typename Rng>
  Ranking sample(Rng& rng) const {
    Ranking order;
    order.reserve(static_cast<std::size_t>(n_));
    Mask placed = 0;
    for (int step = 0; step < n_; ++step) {
      std::uint64_t pick = rng.uniform_below(completion_[static_cast<std::size_t>(placed)]);
      for (int x = 0; x < n_; ++x) {
        if ((placed & bit(x)) || !allowed(x, placed)) continue;
        const std::uint64_t w = completion_[static_cast<std::size_t>(placed | bit(x))];
        if (pick < w) {
          order.push_back(x);
          placed |= bit(x);
          break;
        }
        pick -= w;
      }
    }
    return order;
  }

 private:
  int n_;
  // blockers_[x]: one mask per constraint with subject x; x is blocked once
  // all of the mask has been placed.
  std::vector<std::vector<Mask>> blockers_;
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> completion_;
};

}  // namespace smlab
