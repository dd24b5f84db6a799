#pragma once

#include <cstdint>
#include <memory>

#include "smlab/counting.hpp"
#include "smlab/poset.hpp"
#include "smlab/rng.hpp"

namespace smlab {

// Exactly uniform linear extensions from the down-set count table. The
// order is built back to front: a maximal element x of the unplaced set S
// goes last with probability count(S \ x) / count(S).
class ExactExtensionSampler {
 public:
  // Throws TooLarge above the cap.
  explicit ExactExtensionSampler(Poset poset, int cap = kDefaultPosetCap);

  const Poset& poset() const noexcept { return *poset_; }
  std::uint64_t extension_count() const noexcept { return table_.total(); }

  Ranking sample(Rng& rng) const;

 private:
  std::unique_ptr<Poset> poset_;
  DownsetTable table_;
};

Ranking sample_extension_exact(const Poset& poset, Rng& rng, int cap = kDefaultPosetCap);

// ceil(8 n^3 ln(n + 1)).
std::uint64_t default_mcmc_steps(int n);

// Adjacent-transposition chain started from linear_extension(poset). Each
// step draws a position i in [1, n-1] with weight i(n-i) and swaps slots
// i-1 and i with probability 1/2 when the poset allows it.
Ranking sample_extension_mcmc(const Poset& poset, Rng& rng, std::uint64_t steps);

struct SampleRankingOptions {
  int k = 0;                          // 0 selects ceil(600 ln n)
  Fraction threshold{17, 20};         // 0.85
  int restart_limit = 50;
  int exact_cap = kDefaultPosetCap;   // larger posets fall back to the chain
  std::uint64_t mcmc_steps = 0;       // 0 selects default_mcmc_steps(n)
};

struct SampledRanking {
  Ranking order;
  int restarts = 0;
};

int default_sample_count(int n);

// Estimates pairwise preference fractions from k uniform extensions, keeps
// the pairs at or above the threshold and returns a linear extension of
// them. A cyclic estimate triggers a fresh round of samples. Throws
// RestartLimit once the restart budget is exhausted.
SampledRanking sample_ranking(const Poset& poset, Rng& rng, const SampleRankingOptions& options = {});

}  // namespace smlab
