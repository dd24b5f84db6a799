#pragma once

#include "smlab/market.hpp"

namespace smlab {

// Classical deferred acceptance for a full market with unit quotas. The
// result is perfect, stable, and optimal for the proposing side.
// Throws NotFull if the market is not full or some quota exceeds one.
Matching gale_shapley_one_to_one(const Market& market, Side proposing = Side::Worker);

// Many-to-many deferred acceptance with responsive preferences. Proposers
// work down their lists to fill their quotas; receivers hold their best
// proposals up to quota and reject the rest. Proposers are served in
// ascending index order each round. The result is stable, and perfect
// whenever some stable matching is: all stable matchings fill the same
// slots. Throws NotFull.
Matching deferred_acceptance_many(const Market& market, Side proposing = Side::Worker);

}  // namespace smlab
