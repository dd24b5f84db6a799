#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <variant>

#include "acceptance.hpp"
#include "generators.hpp"
#include "smlab/environments.hpp"
#include "smlab/experiment.hpp"
#include "smlab/learners.hpp"
#include "smlab/protocol.hpp"

namespace smlab::acceptance {
namespace {

constexpr PolicyKind kAllPolicies[] = {PolicyKind::Lexicographic, PolicyKind::RandomUniform,
                                       PolicyKind::SerialDictatorship};

struct Trial {
  std::unique_ptr<Environment> env;
  std::unique_ptr<Learner> learner;
};

// Environment seeded mix64(seed), learner seeded seed, with the public
// orders handed over before the run starts.
Trial make_trial(LearnerKind kind, PolicyKind policy, const Market& market, std::uint64_t seed,
                 const LearnerOptions& options = {}) {
  Trial t;
  if (policy == PolicyKind::SerialDictatorship) {
    t.env = std::make_unique<SerialDictatorshipEnvironment>(market.n_workers(), mix64(seed));
  } else {
    t.env = std::make_unique<TruthfulEnvironment>(market, policy, mix64(seed));
  }
  t.learner = make_learner(kind, t.env->shape(), seed, options);
  for (const auto& [agent, order] : t.env->public_orders()) t.learner->set_known_order(agent, order);
  return t;
}

Transcript run(Trial& t, std::uint64_t seed, std::function<void(const RoundRecord&, const Learner&)> on_round = {}) {
  RunOptions options;
  options.learner_seed = seed;
  options.environment_seed = mix64(seed);
  options.on_round = std::move(on_round);
  return run_protocol(*t.learner, *t.env, options);
}

bool unsuccessful(const RoundRecord& r) { return !std::holds_alternative<Stable>(r.response); }

std::vector<AgentId> agents_of(const Market& m) {
  std::vector<AgentId> out;
  for (Side side : {Side::Worker, Side::Firm}) {
    for (int i = 0; i < m.size(side); ++i) out.push_back({side, i});
  }
  return out;
}

ExtensionCount factorial(int n) {
  ExtensionCount f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// ceil(log_base((n!)^(2n))).
std::uint64_t log_bound(int n, double base) {
  return static_cast<std::uint64_t>(std::ceil(2.0 * n * std::lgamma(n + 1.0) / std::log(base) - 1e-9));
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::string describe_run(LearnerKind kind, PolicyKind policy, const Market& m, std::uint64_t seed) {
  std::ostringstream os;
  os << to_string(kind) << '/' << to_string(policy) << " W=" << m.n_workers() << " F=" << m.n_firms()
     << " seed=" << seed;
  return os.str();
}

Market one_to_one_market(int n, std::uint64_t seed) {
  Rng rng(mix64(mix64(seed)));
  return random_full_market(n, n, 1, 1, rng);
}

}  // namespace

Verdict representative_progress(const Context& ctx) {
  LearnerOptions options;
  options.alpha = Fraction(4, 5);
  FailureLog log;
  std::uint64_t index = 0;
  int runs = 0;
  int rounds_checked = 0;
  double worst_factor = 0;
  std::ostringstream worst;

  for (int n = 1; n <= 6; ++n) {
    const std::uint64_t bound = log_bound(n, 1.25) + 1;
    int max_queries = 0;
    for (PolicyKind policy : kAllPolicies) {
      for (int s = 0; s < 100; ++s, ++runs) {
        const std::uint64_t seed = split_seed(ctx.seed ^ 0x7, index++);
        const Market market = one_to_one_market(n, seed);
        Trial t = make_trial(LearnerKind::RepresentativeExact, policy, market, seed, options);
        const std::string where = describe_run(LearnerKind::RepresentativeExact, policy, market, seed);

        std::map<AgentId, ExtensionCount> count;
        for (AgentId a : agents_of(t.env->shape())) count[a] = count_extensions_poset(t.learner->poset(a));
        const Transcript tr = run(t, seed, [&](const RoundRecord& r, const Learner& l) {
          if (!unsuccessful(r)) return;
          ++rounds_checked;
          double best = 1.0;
          bool shrunk = false;
          for (AgentId a : l.last_updated()) {
            const ExtensionCount now = count_extensions_poset(l.poset(a));
            shrunk = shrunk || now * 5 <= count[a] * 4;
            best = std::min(best, static_cast<double>(now) / static_cast<double>(count[a]));
            count[a] = now;
          }
          worst_factor = std::max(worst_factor, best);
          if (!shrunk) log.add(where, " round ", r.t, ": best shrink factor ", best);
        });
        if (tr.outcome != Outcome::Stable) log.add(where, ": outcome ", to_string(tr.outcome), ' ', tr.message);
        if (static_cast<std::uint64_t>(tr.queries()) > bound) log.add(where, ": ", tr.queries(), " rounds > ", bound);
        max_queries = std::max(max_queries, tr.queries());
      }
    }
    worst << " n=" << n << ':' << max_queries << '/' << bound;
  }

  std::ostringstream os;
  os << runs << " runs, " << rounds_checked << " unsuccessful rounds, largest per-round best shrink factor "
     << worst_factor << "; max rounds vs bound" << worst.str();
  if (!log.empty()) os << "; " << log.summary();
  return {log.empty(), os.str()};
}

Verdict naive_bound(const Context& ctx) {
  FailureLog log;
  std::uint64_t index = 0;
  int runs = 0;
  std::ostringstream worst;
  for (int n = 1; n <= 6; ++n) {
    const int bound = n * n * (n - 1) + 1;
    int max_queries = 0;
    for (PolicyKind policy : kAllPolicies) {
      for (int s = 0; s < 200; ++s, ++runs) {
        const std::uint64_t seed = split_seed(ctx.seed ^ 0x8, index++);
        const Market market = one_to_one_market(n, seed);
        Trial t = make_trial(LearnerKind::Naive, policy, market, seed);
        const Transcript tr = run(t, seed);
        const std::string where = describe_run(LearnerKind::Naive, policy, market, seed);
        if (tr.outcome != Outcome::Stable) log.add(where, ": outcome ", to_string(tr.outcome), ' ', tr.message);
        if (tr.queries() > bound) log.add(where, ": ", tr.queries(), " rounds > ", bound);
        max_queries = std::max(max_queries, tr.queries());
      }
    }
    worst << " n=" << n << ':' << max_queries << '/' << bound;
  }
  std::ostringstream os;
  os << runs << " runs; max rounds vs bound" << worst.str();
  if (!log.empty()) os << "; " << log.summary();
  return {log.empty(), os.str()};
}

Verdict serial_lower_bound(const Context& ctx) {
  constexpr int kTrials = 500;
  LearnerOptions options;
  options.alpha = Fraction(4, 5);
  FailureLog log;
  std::ostringstream os;
  std::uint64_t index = 0;

  for (int n : {9, 12, 15}) {
    std::vector<double> q;
    for (int i = 0; i < kTrials; ++i) {
      const std::uint64_t seed = split_seed(ctx.seed ^ 0x9, index++);
      const Transcript tr = run_trial(LearnerKind::RepresentativeExact, PolicyKind::SerialDictatorship, n, 1, 1, seed,
                                      options, 0);
      if (tr.outcome != Outcome::Stable) log.add("n=", n, " seed=", seed, ": outcome ", to_string(tr.outcome));
      q.push_back(tr.queries());
    }
    const double mean = std::accumulate(q.begin(), q.end(), 0.0) / kTrials;
    double var = 0;
    for (double x : q) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / (kTrials - 1));
    const double slack = 3 * sd / std::sqrt(static_cast<double>(kTrials));
    const double target = n * n / 9.0;
    if (mean + slack < target) log.add("n=", n, ": mean ", mean, " + ", slack, " < ", target);
    os << "n=" << n << " mean " << mean << " (sd " << sd << ") vs n^2/9=" << target << "; ";
  }

  // Realized orders at n = 3 must be uniform over the 3! orders per man.
  constexpr int kSoundTrials = 200000;
  constexpr int kN = 3;
  std::vector<std::array<std::uint64_t, 6>> cells(kN, std::array<std::uint64_t, 6>{});
  const Market shape(kN, kN);
  for (int i = 0; i < kSoundTrials; ++i) {
    const std::uint64_t seed = split_seed(ctx.seed ^ 0x99, static_cast<std::uint64_t>(i));
    SerialDictatorshipEnvironment env(kN, mix64(seed));
    auto learner = make_learner(LearnerKind::Naive, env.shape(), seed);
    RunOptions ro;
    ro.learner_seed = seed;
    ro.environment_seed = mix64(seed);
    const Transcript tr = run_protocol(*learner, env, ro);
    if (tr.outcome != Outcome::Stable) {
      log.add("soundness seed=", seed, ": outcome ", to_string(tr.outcome));
      continue;
    }
    const auto orders = env.realized_preferences();
    for (int m = 0; m < kN; ++m) {
      const Ranking& o = orders[static_cast<std::size_t>(m)];
      // Lexicographic index of a permutation of {0, 1, 2}.
      const int idx = o[0] * 2 + (o[1] > o[2] ? 1 : 0);
      ++cells[static_cast<std::size_t>(m)][static_cast<std::size_t>(idx)];
    }
  }
  double worst = 0;
  for (int m = 0; m < kN; ++m) {
    for (int c = 0; c < 6; ++c) {
      const double f = static_cast<double>(cells[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)]) / kSoundTrials;
      worst = std::max(worst, std::abs(f - 1.0 / 6));
      if (std::abs(f - 1.0 / 6) > 0.01) log.add("man ", m, " order ", c, ": frequency ", f);
    }
  }
  os << "n=3 realized-order frequencies within " << worst << " of 1/6 over " << kSoundTrials << " trials";
  if (!log.empty()) os << "; " << log.summary();
  return {log.empty(), os.str()};
}

Verdict many_simple_bound(const Context& ctx) {
  FailureLog log;
  Rng rng(ctx.seed ^ 0xA);
  std::uint64_t index = 0;
  int runs = 0;
  int rounds_checked = 0;
  double worst_ratio = 0;

  for (PolicyKind policy : kAllPolicies) {
    for (int s = 0; s < 100; ++s, ++runs) {
      const std::uint64_t seed = split_seed(ctx.seed ^ 0xA, index++);
      Market market;
      if (policy == PolicyKind::SerialDictatorship) {
        const int n = 1 + rng.uniform_index(4);
        market = Market(n, n);
      } else {
        int nw = 0;
        int nf = 0;
        do {
          nw = 1 + rng.uniform_index(4);
          nf = 1 + rng.uniform_index(4);
        } while (!testing::full_market_possible(nw, nf, 2));
        market = testing::random_full_market(nw, nf, 2, rng);
      }
      Trial t = make_trial(LearnerKind::ManySimple, policy, market, seed);
      const Market& shape = t.env->shape();
      const std::string where = describe_run(LearnerKind::ManySimple, policy, shape, seed);

      std::uint64_t bound = 0;
      for (AgentId a : agents_of(shape)) {
        const int opp = shape.size(opposite(a.side));
        bound += binomial(opp, shape.quota(a)) * static_cast<std::uint64_t>(opp - shape.quota(a));
      }
      std::size_t phi = t.learner->potential();
      const Transcript tr = run(t, seed, [&](const RoundRecord& r, const Learner& l) {
        if (!unsuccessful(r)) return;
        ++rounds_checked;
        if (l.potential() <= phi) log.add(where, " round ", r.t, ": potential ", l.potential(), " after ", phi);
        phi = l.potential();
      });
      if (tr.outcome != Outcome::Stable) log.add(where, ": outcome ", to_string(tr.outcome), ' ', tr.message);
      const auto failed = static_cast<std::uint64_t>(std::max(0, tr.queries() - 1));
      if (failed > bound) log.add(where, ": ", failed, " unsuccessful rounds > ", bound);
      if (bound > 0) worst_ratio = std::max(worst_ratio, static_cast<double>(failed) / static_cast<double>(bound));
    }
  }
  std::ostringstream os;
  os << runs << " runs, " << rounds_checked << " unsuccessful rounds; largest unsuccessful rounds / bound "
     << worst_ratio;
  if (!log.empty()) os << "; " << log.summary();
  return {log.empty(), os.str()};
}

Verdict last_frac_progress(const Context& ctx) {
  constexpr int kN = 4;
  const std::uint64_t bound = log_bound(kN, static_cast<double>(kN) / (kN - 1));
  FailureLog log;
  std::uint64_t index = 0;
  int runs = 0;
  int rounds_checked = 0;
  int max_queries = 0;
  double worst_factor = 0;

  for (PolicyKind policy : {PolicyKind::Lexicographic, PolicyKind::RandomUniform}) {
    for (int s = 0; s < 100; ++s, ++runs) {
      const std::uint64_t seed = split_seed(ctx.seed ^ 0xB, index++);
      Rng market_rng(mix64(mix64(seed)));
      const Market market = random_full_market(kN, kN, 2, 2, market_rng);
      Trial t = make_trial(LearnerKind::ManyLastFracExact, policy, market, seed);
      const std::string where = describe_run(LearnerKind::ManyLastFracExact, policy, market, seed);

      std::map<AgentId, ExtensionCount> count;
      for (AgentId a : agents_of(market)) count[a] = factorial(kN);
      const Transcript tr = run(t, seed, [&](const RoundRecord& r, const Learner& l) {
        if (!unsuccessful(r)) return;
        ++rounds_checked;
        double best = 1.0;
        bool shrunk = false;
        for (AgentId a : l.last_updated()) {
          const ExtensionCount now = count_consistent_general(l.constraints(a));
          shrunk = shrunk || now * kN <= count[a] * (kN - 1);
          best = std::min(best, static_cast<double>(now) / static_cast<double>(count[a]));
          count[a] = now;
        }
        worst_factor = std::max(worst_factor, best);
        if (!shrunk) log.add(where, " round ", r.t, ": best shrink factor ", best);
      });
      if (tr.outcome != Outcome::Stable) log.add(where, ": outcome ", to_string(tr.outcome), ' ', tr.message);
      if (static_cast<std::uint64_t>(tr.queries()) > bound) log.add(where, ": ", tr.queries(), " rounds > ", bound);
      max_queries = std::max(max_queries, tr.queries());
    }
  }
  std::ostringstream os;
  os << runs << " runs, " << rounds_checked << " unsuccessful rounds, largest per-round best shrink factor "
     << worst_factor << " (limit " << (kN - 1.0) / kN << "); max rounds " << max_queries << " vs bound " << bound;
  if (!log.empty()) os << "; " << log.summary();
  return {log.empty(), os.str()};
}

}  // namespace smlab::acceptance
