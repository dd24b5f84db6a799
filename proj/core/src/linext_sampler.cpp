#include "smlab/linext_sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "smlab/error.hpp"

namespace smlab {

ExactExtensionSampler::ExactExtensionSampler(Poset poset, int cap)
    : poset_(std::make_unique<Poset>(std::move(poset))), table_(*poset_, cap) {}

Ranking ExactExtensionSampler::sample(Rng& rng) const {
  const int n = poset_->size();
  Ranking order(static_cast<std::size_t>(n));
  Mask remaining = full_mask(n);
  for (int slot = n - 1; slot >= 0; --slot) {
    std::uint64_t pick = rng.uniform_below(table_.at(remaining));
    for (Mask m = remaining; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if ((poset_->successors(x) & remaining) != 0) continue;
      const std::uint64_t w = table_.at(remaining & ~bit(x));
      if (pick < w) {
        order[static_cast<std::size_t>(slot)] = x;
        remaining &= ~bit(x);
        break;
      }
      pick -= w;
    }
  }
  return order;
}

Ranking sample_extension_exact(const Poset& poset, Rng& rng, int cap) {
  return ExactExtensionSampler(poset, cap).sample(rng);
}

std::uint64_t default_mcmc_steps(int n) {
  if (n < 2) return 0;
  const double v = 8.0 * std::pow(static_cast<double>(n), 3) * std::log(static_cast<double>(n) + 1.0);
  return static_cast<std::uint64_t>(std::ceil(v));
}

Ranking sample_extension_mcmc(const Poset& poset, Rng& rng, std::uint64_t steps) {
  Ranking order = linear_extension(poset);
  const int n = poset.size();
  if (n < 2) return order;
  // cumulative[i-1] = sum of j(n-j) for j <= i.
  std::vector<std::uint64_t> cumulative(static_cast<std::size_t>(n - 1));
  std::uint64_t total = 0;
  for (int i = 1; i < n; ++i) {
    total += static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - i);
    cumulative[static_cast<std::size_t>(i - 1)] = total;
  }
  auto step = [&](std::uint64_t r) {
    // r is uniform in [0, 2 total): the low bit is the coin, the rest the slot.
    if ((r & 1U) == 0) return;
    const std::uint64_t x = r >> 1;
    const auto i = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                                            cumulative.begin()) + 1;
    const int a = order[i - 1];
    const int b = order[i];
    if (!poset.precedes(a, b)) std::swap(order[i - 1], order[i]);
  };
  const std::uint64_t range = 2 * total;
  if (range > (std::uint64_t{1} << 16)) {
    for (std::uint64_t s = 0; s < steps; ++s) step(rng.uniform_below(range));
    return order;
  }
  // Small ranges: cut each 64-bit word into fixed-width chunks and reject
  // chunks outside the range, which keeps every draw exactly uniform. A
  // table maps each draw to its slot (the coin folded in as a move flag),
  // and the swap is branch-free.
  std::vector<std::uint8_t> slot_of(static_cast<std::size_t>(range));
  std::vector<std::uint8_t> moves(static_cast<std::size_t>(range));
  for (std::uint64_t r = 0; r < range; ++r) {
    const std::uint64_t x = r >> 1;
    const auto i = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                                            cumulative.begin()) + 1;
    slot_of[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(i);
    moves[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(r & 1U);
  }
  const int width = std::bit_width(range - 1);
  const std::uint64_t chunk_mask = (std::uint64_t{1} << width) - 1;
  const int per_word = 64 / width;

  if (n <= 8) {
    // Whole state in registers: byte k of `packed` is the element in slot k,
    // bit 8a+b of `before` says a must stay ahead of b.
    std::uint64_t packed = 0;
    for (int k = 0; k < n; ++k) packed |= static_cast<std::uint64_t>(order[static_cast<std::size_t>(k)]) << (8 * k);
    std::uint64_t before = 0;
    for (int x = 0; x < n; ++x) before |= poset.successors(x) << (8 * x);
    std::uint64_t s = 0;
    while (s < steps) {
      std::uint64_t word = rng.next_u64();
      for (int c = 0; c < per_word && s < steps; ++c, word >>= width) {
        const std::uint64_t r = word & chunk_mask;
        if (r >= range) continue;
        ++s;
        const unsigned shift = 8U * (slot_of[static_cast<std::size_t>(r)] - 1U);
        const std::uint64_t a = (packed >> shift) & 0xFFU;
        const std::uint64_t b = (packed >> (shift + 8)) & 0xFFU;
        const std::uint64_t swap = moves[static_cast<std::size_t>(r)] & ~(before >> (8 * a + b)) & 1U;
        const std::uint64_t d = (a ^ b) * swap;
        packed ^= (d << shift) | (d << (shift + 8));
      }
    }
    for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = static_cast<int>((packed >> (8 * k)) & 0xFFU);
    return order;
  }

  std::vector<Mask> succ(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) succ[static_cast<std::size_t>(x)] = poset.successors(x);
  int* o = order.data();
  std::uint64_t s = 0;
  while (s < steps) {
    std::uint64_t word = rng.next_u64();
    for (int c = 0; c < per_word && s < steps; ++c, word >>= width) {
      const std::uint64_t r = word & chunk_mask;
      if (r >= range) continue;
      ++s;
      const std::size_t i = slot_of[static_cast<std::size_t>(r)];
      const int a = o[i - 1];
      const int b = o[i];
      const bool swap = moves[static_cast<std::size_t>(r)] & ~(succ[static_cast<std::size_t>(a)] >> b) & 1U;
      o[i - 1] = swap ? b : a;
      o[i] = swap ? a : b;
    }
  }
  return order;
}

int default_sample_count(int n) {
  if (n < 2) return 1;
  return static_cast<int>(std::ceil(600.0 * std::log(static_cast<double>(n))));
}

SampledRanking sample_ranking(const Poset& poset, Rng& rng, const SampleRankingOptions& options) {
  const int n = poset.size();
  if (n <= 1) return {linear_extension(poset), 0};
  const int k = options.k > 0 ? options.k : default_sample_count(n);
  const std::uint64_t steps = options.mcmc_steps > 0 ? options.mcmc_steps : default_mcmc_steps(n);
  std::unique_ptr<ExactExtensionSampler> exact;
  if (n <= std::min(options.exact_cap, kHardEnumerationLimit)) {
    exact = std::make_unique<ExactExtensionSampler>(poset, options.exact_cap);
  }
  const auto nn = static_cast<std::size_t>(n);
  std::vector<std::uint32_t> ahead(nn * nn);
  std::vector<int> pos(nn);
  const auto& num = numerator(options.threshold);
  const auto& den = denominator(options.threshold);
  const boost::multiprecision::cpp_int needed_scaled = num * k;

  for (int restarts = 0;; ++restarts) {
    if (restarts > options.restart_limit) {
      fail(ErrorCode::RestartLimit, "estimated relation stayed cyclic after " + std::to_string(options.restart_limit) +
                                        " restarts");
    }
    std::fill(ahead.begin(), ahead.end(), 0);
    for (int draw = 0; draw < k; ++draw) {
      const Ranking order = exact ? exact->sample(rng) : sample_extension_mcmc(poset, rng, steps);
      for (std::size_t p = 0; p < nn; ++p) pos[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
      for (std::size_t a = 0; a < nn; ++a) {
        for (std::size_t b = 0; b < nn; ++b) {
          if (pos[a] < pos[b]) ++ahead[a * nn + b];
        }
      }
    }
    Poset estimate(n);
    bool cyclic = false;
    for (int a = 0; a < n && !cyclic; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        // ahead / k >= threshold, compared exactly.
        if (den * ahead[static_cast<std::size_t>(a) * nn + static_cast<std::size_t>(b)] < needed_scaled) continue;
        if (estimate.precedes(b, a)) {
          cyclic = true;
          break;
        }
        estimate.add(a, b);
      }
    }
    if (!cyclic) return {linear_extension(estimate), restarts};
  }
}

}  // namespace smlab
