#include <benchmark/benchmark.h>

#include "smlab/counting.hpp"
#include "smlab/deferred_acceptance.hpp"
#include "smlab/experiment.hpp"
#include "smlab/linext_sampler.hpp"

namespace {

using namespace smlab;

// Two interleaved chains: 0 < 2 < 4 < ... and 1 < 3 < 5 < ...
Poset two_chains(int n) {
  Poset p(n);
  for (int i = 0; i + 2 < n; ++i) p.add(i, i + 2);
  return p;
}

void BM_CountExtensions(benchmark::State& state) {
  const Poset p = two_chains(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_extensions_poset(p, kHardEnumerationLimit));
}
BENCHMARK(BM_CountExtensions)->DenseRange(8, 20, 4);

void BM_PairwiseCounts(benchmark::State& state) {
  const Poset p = two_chains(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_counts(p, kHardEnumerationLimit));
}
BENCHMARK(BM_PairwiseCounts)->DenseRange(8, 16, 4);

void BM_ExactSample(benchmark::State& state) {
  const ExactExtensionSampler sampler(two_chains(static_cast<int>(state.range(0))));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(rng));
}
BENCHMARK(BM_ExactSample)->DenseRange(8, 16, 4);

void BM_ChainSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Poset p = two_chains(n);
  Rng rng(1);
  const auto steps = default_mcmc_steps(n);
  for (auto _ : state) benchmark::DoNotOptimize(sample_extension_mcmc(p, rng, steps));
}
BENCHMARK(BM_ChainSample)->Arg(7)->Arg(12)->Arg(20);

void BM_DeferredAcceptance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const Market m = random_full_market(n, n, 2, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(deferred_acceptance_many(m));
}
BENCHMARK(BM_DeferredAcceptance)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
