#include "smlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "smlab/error.hpp"

namespace smlab {

namespace {

using nlohmann::json;

template <typename T, typename F>
std::vector<T> list_of(const json& j, const char* key, F convert) {
  std::vector<T> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (v.is_array()) {
    for (const auto& item : v) out.push_back(convert(item));
  } else {
    out.push_back(convert(v));
  }
  return out;
}

Fraction fraction_field(const json& v) {
  if (v.is_string()) return parse_decimal(v.get<std::string>());
  if (v.is_number_integer()) return Fraction(v.get<long long>());
  // Decimal literal: reparse its shortest text form so 0.85 stays 17/20.
  return parse_decimal(v.dump());
}

int positive_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const long long v = j.at(key).get<long long>();
  if (v <= 0) fail(ErrorCode::ConfigError, std::string(key) + " must be positive");
  return static_cast<int>(v);
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) fail(ErrorCode::ConfigError, "config must be a JSON object");
    c.learners = list_of<LearnerKind>(j, "learners", [](const json& v) { return parse_learner_kind(v.get<std::string>()); });
    if (c.learners.empty()) {
      c.learners = list_of<LearnerKind>(j, "learner", [](const json& v) { return parse_learner_kind(v.get<std::string>()); });
    }
    c.policies = list_of<PolicyKind>(j, "policies", [](const json& v) { return parse_policy_kind(v.get<std::string>()); });
    if (c.policies.empty()) {
      c.policies = list_of<PolicyKind>(j, "policy", [](const json& v) { return parse_policy_kind(v.get<std::string>()); });
    }
    c.sizes = list_of<int>(j, "n", [](const json& v) { return v.get<int>(); });
    if (c.learners.empty() || c.policies.empty() || c.sizes.empty()) {
      fail(ErrorCode::ConfigError, "config needs learners, policies and n");
    }
    for (int n : c.sizes) {
      if (n <= 0) fail(ErrorCode::ConfigError, "every n must be positive");
    }
    if (j.contains("quotas")) {
      const json& q = j.at("quotas");
      c.worker_quota = positive_int(q, "worker", 1);
      c.firm_quota = positive_int(q, "firm", 1);
    }
    c.trials = positive_int(j, "trials", 1);
    if (j.contains("seed")) c.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_rounds")) c.max_rounds = static_cast<std::uint64_t>(positive_int(j, "max_rounds", 1));
    if (j.contains("alpha")) c.learner_options.alpha = fraction_field(j.at("alpha"));
    if (j.contains("k")) {
      c.learner_options.sampling.k = positive_int(j, "k", 1);
      c.learner_options.many_samples = c.learner_options.sampling.k;
    }
    if (j.contains("threshold")) c.learner_options.sampling.threshold = fraction_field(j.at("threshold"));
    if (j.contains("mcmc_steps")) {
      c.learner_options.sampling.mcmc_steps = static_cast<std::uint64_t>(positive_int(j, "mcmc_steps", 1));
    }
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("bad config: ") + e.what());
  }
  const Fraction& a = c.learner_options.alpha;
  if (a < Fraction(4, 5) || a >= 1) fail(ErrorCode::ConfigError, "alpha must lie in [0.8, 1)");
  const Fraction& t = c.learner_options.sampling.threshold;
  if (t <= 0 || t > 1) fail(ErrorCode::ConfigError, "threshold must lie in (0, 1]");
  for (int n : c.sizes) {
    if ((n * c.worker_quota) % c.firm_quota != 0 || c.worker_quota > n * c.worker_quota / c.firm_quota ||
        c.firm_quota > n) {
      fail(ErrorCode::ConfigError, "quotas cannot be balanced at n=" + std::to_string(n));
    }
  }
  for (PolicyKind p : c.policies) {
    if (p == PolicyKind::SerialDictatorship && (c.worker_quota != 1 || c.firm_quota != 1)) {
      fail(ErrorCode::ConfigError, "the serial-dictatorship environment is one-to-one");
    }
  }
  for (LearnerKind k : c.learners) {
    if (is_one_to_one(k) && (c.worker_quota != 1 || c.firm_quota != 1)) {
      fail(ErrorCode::ConfigError, std::string(to_string(k)) + " needs unit quotas");
    }
  }
  return c;
}

Market random_full_market(int n_workers, int n_firms, int worker_quota, int firm_quota, Rng& rng) {
  Market m(n_workers, n_firms);
  for (Side side : {Side::Worker, Side::Firm}) {
    const int n = m.size(side);
    const int other = m.size(opposite(side));
    for (int i = 0; i < n; ++i) {
      Ranking r(static_cast<std::size_t>(other));
      std::iota(r.begin(), r.end(), 0);
      rng.shuffle(std::span<int>(r));
      m.set_prefs({side, i}, std::move(r));
      m.set_quota({side, i}, side == Side::Worker ? worker_quota : firm_quota);
    }
  }
  return m;
}

Transcript run_trial(LearnerKind learner, PolicyKind policy, int n, int worker_quota, int firm_quota,
                     std::uint64_t seed, const LearnerOptions& options, std::uint64_t max_rounds) {
  const std::uint64_t env_seed = mix64(seed);
  RunOptions run;
  run.learner_seed = seed;
  run.environment_seed = env_seed;
  run.max_rounds = max_rounds;
  std::unique_ptr<Environment> env;
  if (policy == PolicyKind::SerialDictatorship) {
    env = std::make_unique<SerialDictatorshipEnvironment>(n, env_seed);
  } else {
    Rng market_rng(mix64(env_seed));
    env = std::make_unique<TruthfulEnvironment>(
        random_full_market(n, n * worker_quota / firm_quota, worker_quota, firm_quota, market_rng), policy, env_seed);
  }
  auto l = make_learner(learner, env->shape(), seed, options);
  return run_protocol(*l, *env, run);
}

BenchResult bench(const ExperimentConfig& config, const std::function<void(const ExperimentRow&)>& on_row) {
  BenchResult result;
  int run_id = 0;
  for (LearnerKind learner : config.learners) {
    for (PolicyKind policy : config.policies) {
      for (int n : config.sizes) {
        for (int trial = 0; trial < config.trials; ++trial, ++run_id) {
          ExperimentRow row;
          row.run_id = run_id;
          row.n = n;
          row.quota_max = std::max(config.worker_quota, config.firm_quota);
          row.seed = split_seed(config.base_seed, static_cast<std::uint64_t>(run_id));
          row.learner = std::string(to_string(learner));
          row.policy = std::string(to_string(policy));
          const auto start = std::chrono::steady_clock::now();
          try {
            const Transcript tr = run_trial(learner, policy, n, config.worker_quota, config.firm_quota, row.seed,
                                            config.learner_options, config.max_rounds);
            row.queries = tr.queries();
            row.restarts = tr.restarts;
            row.outcome = tr.outcome;
          } catch (const Error&) {
            row.outcome = Outcome::Error;
          }
          row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start)
                            .count();
          if (row.outcome != Outcome::Stable) result.any_error = true;
          if (on_row) on_row(row);
          result.rows.push_back(std::move(row));
        }
      }
    }
  }
  result.cells = summarize(result.rows);
  result.fits = fit_scaling(result.cells);
  return result;
}

std::vector<CellSummary> summarize(const std::vector<ExperimentRow>& rows) {
  std::map<std::tuple<std::string, std::string, int>, std::vector<const ExperimentRow*>> groups;
  std::vector<std::tuple<std::string, std::string, int>> order;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.learner, r.policy, r.n);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<CellSummary> out;
  for (const auto& key : order) {
    const auto& g = groups[key];
    CellSummary c;
    std::tie(c.learner, c.policy, c.n) = key;
    std::vector<int> q;
    for (const auto* r : g) {
      if (r->outcome == Outcome::Stable) {
        q.push_back(r->queries);
      } else {
        ++c.errors;
      }
    }
    c.trials = static_cast<int>(g.size());
    if (!q.empty()) {
      std::sort(q.begin(), q.end());
      const double sum = std::accumulate(q.begin(), q.end(), 0.0);
      c.mean = sum / static_cast<double>(q.size());
      const std::size_t mid = q.size() / 2;
      c.median = q.size() % 2 == 1 ? q[mid] : 0.5 * (q[mid - 1] + q[mid]);
      c.max = q.back();
      double ss = 0;
      for (int v : q) ss += (v - c.mean) * (v - c.mean);
      c.stddev = q.size() > 1 ? std::sqrt(ss / static_cast<double>(q.size() - 1)) : 0.0;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ScalingFit> fit_scaling(const std::vector<CellSummary>& cells) {
  std::vector<ScalingFit> out;
  for (const auto& c : cells) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ScalingFit& f) { return f.learner == c.learner && f.policy == c.policy; });
    if (it == out.end()) {
      out.push_back({c.learner, c.policy, 0, 0, 0});
      it = out.end() - 1;
    }
  }
  for (auto& f : out) {
    double xy1 = 0;
    double xx1 = 0;
    double xy2 = 0;
    double xx2 = 0;
    for (const auto& c : cells) {
      if (c.learner != f.learner || c.policy != f.policy || c.trials == c.errors) continue;
      const double n = c.n;
      const double x1 = n * n * std::log2(std::max(n, 2.0));
      const double x2 = n * n * n;
      xy1 += x1 * c.mean;
      xx1 += x1 * x1;
      xy2 += x2 * c.mean;
      xx2 += x2 * x2;
      ++f.cells;
    }
    f.c_n2_log2n = xx1 > 0 ? xy1 / xx1 : 0;
    f.c_n3 = xx2 > 0 ? xy2 / xx2 : 0;
  }
  return out;
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.run_id << ',' << r.n << ',' << r.quota_max << ',' << r.seed << ',' << r.learner << ',' << r.policy << ','
        << r.queries << ',' << r.wall_ns << ',' << r.restarts << ',' << to_string(r.outcome) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
  out << "learner,policy,n,trials,errors,mean,median,max,stddev,mean_over_n2log2n,mean_over_n3,n2_over_9\n";
  for (const auto& c : cells) {
    const double n = c.n;
    out << c.learner << ',' << c.policy << ',' << c.n << ',' << c.trials << ',' << c.errors << ',' << c.mean << ','
        << c.median << ',' << c.max << ',' << c.stddev << ',' << c.mean / (n * n * std::log2(std::max(n, 2.0))) << ','
        << c.mean / (n * n * n) << ',' << n * n / 9.0 << '\n';
  }
}

void write_fits_csv(std::ostream& out, const std::vector<ScalingFit>& fits) {
  out << "learner,policy,cells,c_n2log2n,c_n3\n";
  for (const auto& f : fits) {
    out << f.learner << ',' << f.policy << ',' << f.cells << ',' << f.c_n2_log2n << ',' << f.c_n3 << '\n';
  }
}

}  // namespace smlab
