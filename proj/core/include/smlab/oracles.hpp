#pragma once

#include <vector>

#include "smlab/market.hpp"

namespace smlab {

inline constexpr int kStableEnumerationMaxSide = 5;
inline constexpr int kStableEnumerationMaxQuota = 2;

// Every stable matching, by exhaustive search over quota-respecting sets of
// mutually acceptable pairs. Output is sorted. Throws TooLarge beyond five
// agents per side or quotas above two.
std::vector<Matching> enumerate_stable_matchings(const Market& market);

}  // namespace smlab
