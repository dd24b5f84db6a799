#include "smlab/deferred_acceptance.hpp"

#include <algorithm>

#include "smlab/error.hpp"

namespace smlab {

namespace {

void require_full(const Market& market) {
  if (!market.is_full()) fail(ErrorCode::NotFull, "deferred acceptance needs complete lists and balanced quotas");
}

Pair make_pair(Side proposing, int proposer, int receiver) {
  return proposing == Side::Worker ? Pair{proposer, receiver} : Pair{receiver, proposer};
}

}  // namespace

Matching gale_shapley_one_to_one(const Market& market, Side proposing) {
  require_full(market);
  if (!market.all_quotas_one()) fail(ErrorCode::NotFull, "one-to-one deferred acceptance needs unit quotas");

  const Side receiving = opposite(proposing);
  const int n = market.size(proposing);
  std::vector<int> next(static_cast<std::size_t>(n), 0);
  std::vector<int> held_by(static_cast<std::size_t>(market.size(receiving)), -1);
  std::vector<char> engaged(static_cast<std::size_t>(n), 0);

  bool progress = true;
  while (progress) {
    progress = false;
    for (int p = 0; p < n; ++p) {
      if (engaged[static_cast<std::size_t>(p)]) continue;
      const auto& list = market.prefs({proposing, p});
      const int r = list[static_cast<std::size_t>(next[static_cast<std::size_t>(p)]++)];
      progress = true;
      int& holder = held_by[static_cast<std::size_t>(r)];
      if (holder < 0) {
        holder = p;
        engaged[static_cast<std::size_t>(p)] = 1;
      } else if (market.prefers({receiving, r}, p, holder)) {
        engaged[static_cast<std::size_t>(holder)] = 0;
        holder = p;
        engaged[static_cast<std::size_t>(p)] = 1;
      }
    }
  }

  std::vector<Pair> pairs;
  for (int r = 0; r < market.size(receiving); ++r) {
    pairs.push_back(make_pair(proposing, held_by[static_cast<std::size_t>(r)], r));
  }
  return Matching(std::move(pairs));
}

Matching deferred_acceptance_many(const Market& market, Side proposing) {
  require_full(market);

  const Side receiving = opposite(proposing);
  const int np = market.size(proposing);
  const int nr = market.size(receiving);
  std::vector<int> next(static_cast<std::size_t>(np), 0);
  std::vector<int> held_count(static_cast<std::size_t>(np), 0);
  std::vector<std::vector<int>> held(static_cast<std::size_t>(nr));
  std::vector<std::vector<int>> incoming(static_cast<std::size_t>(nr));

  bool progress = true;
  while (progress) {
    progress = false;
    for (int p = 0; p < np; ++p) {
      const AgentId a{proposing, p};
      const auto& list = market.prefs(a);
      auto& nx = next[static_cast<std::size_t>(p)];
      int want = market.quota(a) - held_count[static_cast<std::size_t>(p)];
      while (want > 0 && nx < static_cast<int>(list.size())) {
        incoming[static_cast<std::size_t>(list[static_cast<std::size_t>(nx++)])].push_back(p);
        ++held_count[static_cast<std::size_t>(p)];
        --want;
        progress = true;
      }
    }
    for (int r = 0; r < nr; ++r) {
      auto& in = incoming[static_cast<std::size_t>(r)];
      if (in.empty()) continue;
      auto& h = held[static_cast<std::size_t>(r)];
      h.insert(h.end(), in.begin(), in.end());
      in.clear();
      const AgentId rec{receiving, r};
      std::sort(h.begin(), h.end(), [&](int x, int y) { return market.rank(rec, x) < market.rank(rec, y); });
      const auto q = static_cast<std::size_t>(market.quota(rec));
      for (std::size_t k = q; k < h.size(); ++k) --held_count[static_cast<std::size_t>(h[k])];
      if (h.size() > q) h.resize(q);
    }
  }

  std::vector<Pair> pairs;
  for (int r = 0; r < nr; ++r) {
    for (int p : held[static_cast<std::size_t>(r)]) pairs.push_back(make_pair(proposing, p, r));
  }
  return Matching(std::move(pairs));
}

}  // namespace smlab
