#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/math/distributions/chi_squared.hpp>

#include "acceptance.hpp"
#include "brute_force.hpp"
#include "generators.hpp"
#include "smlab/counting.hpp"
#include "smlab/error.hpp"
#include "smlab/linext_sampler.hpp"
#include "smlab/sat_reduction.hpp"

namespace smlab::acceptance {
namespace {

using Relations = std::vector<std::pair<int, int>>;

// Transitive closure by bit masks; false if the relations contain a cycle.
bool closure(int n, const Relations& rel, std::vector<Mask>& succ) {
  succ.assign(static_cast<std::size_t>(n), 0);
  for (auto [a, b] : rel) succ[static_cast<std::size_t>(a)] |= bit(b);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (succ[static_cast<std::size_t>(i)] & bit(k)) succ[static_cast<std::size_t>(i)] |= succ[static_cast<std::size_t>(k)];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (succ[static_cast<std::size_t>(i)] & bit(i)) return false;
  }
  return true;
}

std::string show(const Relations& rel) {
  std::ostringstream os;
  os << '{';
  for (auto [a, b] : rel) os << ' ' << a << '<' << b;
  os << " }";
  return os.str();
}

std::uint64_t order_key(const Ranking& order) {
  std::uint64_t key = 0;
  for (int x : order) key = key * 8 + static_cast<std::uint64_t>(x);
  return key;
}

// One representative per isomorphism class of posets on n elements with at
// most max_extensions linear extensions. Every poset is isomorphic to one
// whose relations all go from a smaller to a larger index, so only those
// are generated; the class key is the smallest relabeled successor vector.
std::vector<Poset> poset_classes(int n, std::uint64_t max_extensions) {
  Relations slots;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  }
  std::set<std::vector<Mask>> seen;
  std::vector<Poset> out;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (Mask m = 0; m < bit(static_cast<int>(slots.size())); ++m) {
    std::vector<Mask> succ(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if ((m >> k) & 1U) succ[static_cast<std::size_t>(slots[k].first)] |= bit(slots[k].second);
    }
    bool closed = true;
    for (int a = 0; a < n && closed; ++a) {
      for (Mask x = succ[static_cast<std::size_t>(a)]; x != 0; x &= x - 1) {
        const int b = std::countr_zero(x);
        if (succ[static_cast<std::size_t>(b)] & ~succ[static_cast<std::size_t>(a)]) {
          closed = false;
          break;
        }
      }
    }
    if (!closed) continue;
    Relations rel;
    for (int a = 0; a < n; ++a) {
      for (Mask x = succ[static_cast<std::size_t>(a)]; x != 0; x &= x - 1) rel.emplace_back(a, std::countr_zero(x));
    }
    Poset p = Poset::from_relations(n, rel);
    if (count_extensions_poset(p) > max_extensions) continue;
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Mask> best;
    do {
      std::vector<Mask> relabeled(static_cast<std::size_t>(n), 0);
      for (auto [a, b] : rel) relabeled[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])] |= bit(perm[static_cast<std::size_t>(b)]);
      if (best.empty() || relabeled < best) best = relabeled;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (seen.insert(best).second) out.push_back(std::move(p));
  }
  return out;
}

// Asymptotic Kolmogorov tail P(sqrt(m) D > x).
double kolmogorov_tail(double x) {
  if (x < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) sum += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(sum, 0.0, 1.0);
}

// Kolmogorov-Smirnov p-value of the sample against U(0, 1).
double uniformity_pvalue(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double m = static_cast<double>(u.size());
  double d = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1) / m - u[i], u[i] - static_cast<double>(i) / m});
  }
  const double sm = std::sqrt(m);
  return kolmogorov_tail((sm + 0.12 + 0.11 / sm) * d);
}

}  // namespace

Verdict extension_counting(const Context& ctx) {
  FailureLog log;
  std::ostringstream os;
  std::size_t checked = 0;
  os << "acyclic relation sets per n:";
  for (int n = 1; n <= 5; ++n) {
    Relations pairs;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a != b) pairs.emplace_back(a, b);
      }
    }
    std::size_t acyclic = 0;
    std::vector<Mask> succ;
    for (Mask m = 0; m < bit(static_cast<int>(pairs.size())); ++m) {
      Relations rel;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        if ((m >> k) & 1U) rel.push_back(pairs[k]);
      }
      if (!closure(n, rel, succ)) continue;
      ++acyclic;
      const auto expected = testing::extensions_by_filter(n, rel).size();
      const auto got = count_extensions_poset(Poset::from_relations(n, rel));
      if (got != expected) log.add("n=", n, ' ', show(rel), ": ", got, " vs ", expected);
    }
    checked += acyclic;
    os << ' ' << acyclic;
  }

  Rng rng(ctx.seed ^ 0x3);
  static constexpr double kDensities[] = {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8};
  for (int t = 0; t < 1000; ++t) {
    const auto rel = testing::random_acyclic_relations(7, kDensities[rng.uniform_below(std::size(kDensities))], rng);
    const auto expected = testing::extensions_by_filter(7, rel).size();
    const auto got = count_extensions_poset(Poset::from_relations(7, rel));
    if (got != expected) log.add("n=7 ", show(rel), ": ", got, " vs ", expected);
  }
  os << "; " << checked << " exhaustive and 1000 random n=7 posets";
  if (!log.empty()) os << "; " << log.summary();
  return {log.empty(), os.str()};
}

Verdict proportional_transitivity(const Context& ctx) {
  Rng rng(ctx.seed ^ 0x4);
  const Fraction phi(4, 5);
  FailureLog counts;
  FailureLog transitivity;
  FailureLog cycles;
  std::size_t triples = 0;
  static constexpr double kDensities[] = {0.05, 0.1, 0.2, 0.3, 0.5};

  for (int t = 0; t < 10000; ++t) {
    const int n = 1 + rng.uniform_index(7);
    const auto rel = testing::random_acyclic_relations(n, kDensities[rng.uniform_below(std::size(kDensities))], rng);
    const auto exts = testing::extensions_by_filter(n, rel);
    const auto nn = static_cast<std::size_t>(n);
    std::vector<std::uint64_t> before(nn * nn, 0);
    for (const auto& order : exts) {
      for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t j = i + 1; j < nn; ++j) ++before[static_cast<std::size_t>(order[i]) * nn + static_cast<std::size_t>(order[j])];
      }
    }
    const PairwiseCounts library = pairwise_counts(Poset::from_relations(n, rel));
    if (library.total != exts.size() || library.before != before) counts.add("pairwise counts differ on ", show(rel));

    std::vector<std::vector<bool>> strong(nn, std::vector<bool>(nn, false));
    Relations s;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const Fraction p(before[static_cast<std::size_t>(a) * nn + static_cast<std::size_t>(b)], exts.size());
        if (p >= phi) {
          strong[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
          s.emplace_back(a, b);
        }
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (!strong[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) continue;
        for (int c = 0; c < n; ++c) {
          if (c == a || c == b || !strong[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]) continue;
          ++triples;
          if (!strong[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]) {
            transitivity.add(a, '<', b, '<', c, " on n=", n, ' ', show(rel));
          }
        }
      }
    }
    std::vector<Mask> succ;
    if (!closure(n, s, succ)) cycles.add("cycle among strong pairs on n=", n, ' ', show(rel));
  }

  std::ostringstream os;
  os << "10000 posets, " << triples << " strong chains a<b<c checked; transitivity violations "
     << transitivity.count() << ", cyclic strong relations " << cycles.count() << ", count mismatches "
     << counts.count();
  for (const FailureLog* log : {&transitivity, &cycles, &counts}) {
    if (!log->empty()) os << "; " << log->summary();
  }
  return {transitivity.empty() && cycles.empty() && counts.empty(), os.str()};
}

Verdict sampler_uniformity(const Context& ctx) {
  constexpr int kDraws = 100000;
  // Family-wise significance over all instances plus the p-value
  // uniformity test.
  constexpr double kSignificance = 0.001;
  constexpr double kMaxTv = 0.05;

  std::vector<Poset> family;
  std::ostringstream classes;
  classes << "classes per n:";
  for (int n = 1; n <= 7; ++n) {
    auto part = poset_classes(n, 24);
    classes << ' ' << part.size();
    for (auto& p : part) family.push_back(std::move(p));
  }
  std::size_t tested = 0;
  for (const Poset& p : family) {
    if (count_extensions_poset(p) > 1) ++tested;
  }
  const double per_instance = kSignificance / static_cast<double>(tested);

  FailureLog exact_fail;
  FailureLog mcmc_fail;
  std::vector<double> pvalues;
  std::size_t raw_below = 0;
  double max_tv = 0.0;
  std::string max_tv_at;

  for (std::size_t index = 0; index < family.size(); ++index) {
    const Poset& p = family[index];
    const int n = p.size();
    Rng rng(split_seed(ctx.seed ^ 0x5, index));
    const auto exts = testing::extensions_by_filter(n, p.relations());
    const std::size_t e = exts.size();
    std::unordered_map<std::uint64_t, std::size_t> slot;
    for (std::size_t i = 0; i < e; ++i) slot.emplace(order_key(exts[i]), i);
    const std::string name = "n=" + std::to_string(n) + " e=" + std::to_string(e);

    std::vector<std::uint64_t> hits(e, 0);
    const ExactExtensionSampler exact(p);
    bool outside = false;
    for (int d = 0; d < kDraws; ++d) {
      const auto it = slot.find(order_key(exact.sample(rng)));
      if (it == slot.end()) outside = true;
      else ++hits[it->second];
    }
    if (outside) {
      exact_fail.add("exact sampler left the extension set on ", name);
    } else if (e > 1) {
      const double expected = static_cast<double>(kDraws) / static_cast<double>(e);
      double stat = 0;
      for (auto h : hits) stat += (static_cast<double>(h) - expected) * (static_cast<double>(h) - expected) / expected;
      const boost::math::chi_squared_distribution<double> dist(static_cast<double>(e - 1));
      const double pvalue = boost::math::cdf(boost::math::complement(dist, stat));
      pvalues.push_back(pvalue);
      if (pvalue < kSignificance) ++raw_below;
      if (pvalue < per_instance) exact_fail.add("chi-square p=", pvalue, " on ", name);
    }

    const int draws = std::max(2000, 400 * static_cast<int>(e));
    const auto steps = default_mcmc_steps(n);
    std::fill(hits.begin(), hits.end(), 0);
    outside = false;
    for (int d = 0; d < draws; ++d) {
      const auto it = slot.find(order_key(sample_extension_mcmc(p, rng, steps)));
      if (it == slot.end()) outside = true;
      else ++hits[it->second];
    }
    if (outside) {
      mcmc_fail.add("chain left the extension set on ", name);
      continue;
    }
    double tv = 0;
    for (auto h : hits) tv += std::abs(static_cast<double>(h) / draws - 1.0 / static_cast<double>(e));
    tv /= 2;
    if (tv > max_tv) {
      max_tv = tv;
      max_tv_at = name;
    }
    if (tv >= kMaxTv) mcmc_fail.add("TV=", tv, " on ", name);
  }

  const double ks = uniformity_pvalue(pvalues);
  if (ks < kSignificance) exact_fail.add("p-values not uniform, KS p=", ks);
  const double min_p = pvalues.empty() ? 1.0 : *std::min_element(pvalues.begin(), pvalues.end());

  std::ostringstream os;
  os << family.size() << " posets (" << classes.str() << "); exact: " << tested << " chi-square tests, smallest p "
     << min_p << " vs per-instance level " << per_instance << ", " << raw_below << " below 0.001 (expected "
     << static_cast<double>(tested) * 0.001 << "), KS uniformity p " << ks << ", failures " << exact_fail.count()
     << "; chain: largest TV " << max_tv << " (" << max_tv_at << "), failures " << mcmc_fail.count();
  for (const FailureLog* log : {&exact_fail, &mcmc_fail}) {
    if (!log->empty()) os << "; " << log->summary();
  }
  return {exact_fail.empty() && mcmc_fail.empty(), os.str()};
}

Verdict sampled_representativeness(const Context& ctx) {
  constexpr int kRuns = 500;
  constexpr int kN = 7;
  Rng rng(ctx.seed ^ 0x6);
  SampleRankingOptions options;
  options.k = static_cast<int>(std::ceil(600.0 * std::log(static_cast<double>(kN))));
  options.threshold = Fraction(17, 20);
  int respected = 0;
  int few_restarts = 0;
  int errors = 0;
  int max_restarts = 0;
  std::size_t strong_pairs = 0;

  for (int run = 0; run < kRuns; ++run) {
    const Poset p = testing::random_poset(kN, rng);
    const PairwiseCounts pc = pairwise_counts(p);
    SampledRanking r;
    try {
      r = sample_ranking(p, rng, options);
    } catch (const Error&) {
      ++errors;
      continue;
    }
    const auto pos = positions(r.order);
    bool ok = true;
    for (int a = 0; a < kN; ++a) {
      for (int b = 0; b < kN; ++b) {
        if (a == b || 10 * pc.at(a, b) < 9 * pc.total) continue;
        ++strong_pairs;
        if (pos[static_cast<std::size_t>(a)] > pos[static_cast<std::size_t>(b)]) ok = false;
      }
    }
    if (ok) ++respected;
    if (r.restarts <= 5) ++few_restarts;
    max_restarts = std::max(max_restarts, r.restarts);
  }

  const int needed = (kRuns * 99 + 99) / 100;
  std::ostringstream os;
  os << kRuns << " runs, K=" << options.k << ": " << respected << " respect every pair with fraction >= 0.9 ("
     << strong_pairs << " pairs), " << few_restarts << " needed at most 5 restarts (max " << max_restarts
     << "), errors " << errors << "; required " << needed << " each";
  return {respected >= needed && few_restarts >= needed, os.str()};
}

Verdict sat_reduction(const Context& ctx) {
  Rng rng(ctx.seed ^ 0xC);
  FailureLog log;
  int sat = 0;
  for (int t = 0; t < 50; ++t) {
    const Cnf cnf = testing::random_cnf(1 + rng.uniform_index(4), 1 + rng.uniform_index(6), rng);
    const MixedInstance inst = reduce_3sat(cnf);
    const bool table = satisfiable_by_truth_table(cnf);
    const bool search = testing::cnf_satisfiable_by_search(cnf);
    const bool orders = testing::mixed_consistent_by_filter(inst);
    const bool decided = decide_mixed_consistent(inst);
    if (table) ++sat;
    if (table != orders || table != search || table != decided) {
      log.add("formula ", write_dimacs(cnf), ": truth table ", table, ", search ", search, ", order filter ", orders,
              ", order table ", decided);
    }
  }
  std::ostringstream os;
  os << "50 formulas (" << sat << " satisfiable), disagreements " << log.count();
  if (!log.empty()) os << "; " << log.summary();
  return {log.empty(), os.str()};
}

}  // namespace smlab::acceptance
