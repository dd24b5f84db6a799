#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "smlab/environments.hpp"
#include "smlab/learners.hpp"
#include "smlab/protocol.hpp"

namespace smlab {

struct ExperimentConfig {
  std::vector<LearnerKind> learners;
  std::vector<PolicyKind> policies;
  std::vector<int> sizes;      // workers per market
  int worker_quota = 1;
  int firm_quota = 1;          // firms = sizes[i] * worker_quota / firm_quota
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t max_rounds = 0;  // 0 selects default_max_rounds
  LearnerOptions learner_options;
  std::string output;
};

// JSON object with keys learners, policies, n, quotas {worker, firm},
// trials, seed, max_rounds, alpha, k, threshold, mcmc_steps, output.
// Throws ConfigError.
ExperimentConfig parse_experiment_config(std::string_view json_text);

struct ExperimentRow {
  int run_id = 0;
  int n = 0;
  int quota_max = 1;
  std::uint64_t seed = 0;
  std::string learner;
  std::string policy;
  int queries = 0;
  std::int64_t wall_ns = 0;
  int restarts = 0;
  Outcome outcome = Outcome::Error;
};

struct CellSummary {
  std::string learner;
  std::string policy;
  int n = 0;
  int trials = 0;
  int errors = 0;
  double mean = 0;
  double median = 0;
  int max = 0;
  double stddev = 0;
};

// Least-squares constants for queries ~ c * n^2 log2 n and queries ~ c * n^3.
struct ScalingFit {
  std::string learner;
  std::string policy;
  double c_n2_log2n = 0;
  double c_n3 = 0;
  int cells = 0;
};

struct BenchResult {
  std::vector<ExperimentRow> rows;
  std::vector<CellSummary> cells;
  std::vector<ScalingFit> fits;
  bool any_error = false;
};

inline constexpr std::string_view kCsvHeader = "run_id,n,quota_max,seed,learner,policy,queries,wall_ns,restarts,outcome";

// Full market with uniformly random complete lists and uniform quotas.
Market random_full_market(int n_workers, int n_firms, int worker_quota, int firm_quota, Rng& rng);

// One protocol run with the seeds derived from `seed`: the learner uses
// `seed`, the environment mix64(seed) and the market mix64(mix64(seed)).
Transcript run_trial(LearnerKind learner, PolicyKind policy, int n, int worker_quota, int firm_quota,
                     std::uint64_t seed, const LearnerOptions& options, std::uint64_t max_rounds);

// Runs learners x policies x sizes x trials; run i uses split_seed(base, i).
BenchResult bench(const ExperimentConfig& config, const std::function<void(const ExperimentRow&)>& on_row = {});

std::vector<CellSummary> summarize(const std::vector<ExperimentRow>& rows);
std::vector<ScalingFit> fit_scaling(const std::vector<CellSummary>& cells);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells);
void write_fits_csv(std::ostream& out, const std::vector<ScalingFit>& fits);

}  // namespace smlab
