#include "smlab/oracles.hpp"

#include <algorithm>

#include "smlab/error.hpp"

namespace smlab {

namespace {

struct Search {
  const Market& market;
  std::vector<Pair> candidates;
  std::vector<int> load_w;
  std::vector<int> load_f;
  std::vector<Pair> chosen;
  std::vector<Matching> found;

  void run(std::size_t next) {
    if (next == candidates.size()) {
      Matching m(chosen);
      if (is_stable(market, m)) found.push_back(std::move(m));
      return;
    }
    run(next + 1);
    const Pair p = candidates[next];
    auto& lw = load_w[static_cast<std::size_t>(p.worker)];
    auto& lf = load_f[static_cast<std::size_t>(p.firm)];
    if (lw < market.quota(worker(p.worker)) && lf < market.quota(firm(p.firm))) {
      ++lw;
      ++lf;
      chosen.push_back(p);
      run(next + 1);
      chosen.pop_back();
      --lw;
      --lf;
    }
  }
};

}  // namespace

std::vector<Matching> enumerate_stable_matchings(const Market& market) {
  if (market.n_workers() > kStableEnumerationMaxSide || market.n_firms() > kStableEnumerationMaxSide ||
      market.max_quota() > kStableEnumerationMaxQuota) {
    fail(ErrorCode::TooLarge, "stable-matching enumeration supports up to 5 agents per side and quotas up to 2");
  }
  Search s{market, {}, {}, {}, {}, {}};
  s.load_w.assign(static_cast<std::size_t>(market.n_workers()), 0);
  s.load_f.assign(static_cast<std::size_t>(market.n_firms()), 0);
  for (int w = 0; w < market.n_workers(); ++w) {
    for (int f = 0; f < market.n_firms(); ++f) {
      // A stable matching is individually rational.
      if (market.acceptable(worker(w), f) && market.acceptable(firm(f), w)) s.candidates.push_back({w, f});
    }
  }
  s.run(0);
  std::sort(s.found.begin(), s.found.end(),
            [](const Matching& a, const Matching& b) { return a.pairs() < b.pairs(); });
  return s.found;
}

}  // namespace smlab
