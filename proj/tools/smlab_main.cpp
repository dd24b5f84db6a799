// smlab: run interactive stable-matching learners, benchmarks and oracles.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_util.hpp"
#include "smlab/counting.hpp"
#include "smlab/embedding.hpp"
#include "smlab/environments.hpp"
#include "smlab/error.hpp"
#include "smlab/experiment.hpp"
#include "smlab/learners.hpp"
#include "smlab/market_io.hpp"
#include "smlab/oracles.hpp"
#include "smlab/protocol.hpp"
#include "smlab/sat_reduction.hpp"

namespace {

using namespace smlab;
using namespace smlab::cli;

struct LearnArgs {
  std::string market;
  std::string learner = "rep-exact";
  std::string adversary = "lex";
  std::uint64_t seed = 0;
  std::string alpha = "0.8";
  int k = 0;
  std::string threshold = "0.85";
  std::uint64_t max_rounds = 0;
  std::string transcript;
};

int run_learn(const LearnArgs& a) {
  const EnumerationCaps caps = caps_from_env();
  const Market market = parse_market_file(read_text_file(a.market));
  const LearnerKind kind = parse_learner_kind(a.learner);
  const PolicyKind policy = parse_policy_kind(a.adversary);

  LearnerOptions options;
  options.caps = caps;
  options.alpha = parse_decimal(a.alpha);
  options.sampling.threshold = parse_decimal(a.threshold);
  options.sampling.k = a.k;
  options.many_samples = a.k;

  std::optional<MarketEmbedding> embedding;
  std::unique_ptr<Environment> env;
  const std::uint64_t env_seed = mix64(a.seed);
  if (policy == PolicyKind::SerialDictatorship) {
    if (market.n_workers() != market.n_firms() || !market.all_quotas_one()) {
      fail(ErrorCode::ConfigError, "the serial adversary needs a one-to-one market with equal sides");
    }
    env = std::make_unique<SerialDictatorshipEnvironment>(market.n_workers(), env_seed);
  } else if (market.is_full()) {
    env = std::make_unique<TruthfulEnvironment>(market, policy, env_seed);
  } else {
    embedding = complete_market(market);
    env = std::make_unique<TruthfulEnvironment>(embedding->completed, policy, env_seed);
  }

  auto learner = make_learner(kind, env->shape(), a.seed, options);
  if (embedding) {
    // Phantom preferences are fixed by construction, so the learner knows them.
    const Market& c = embedding->completed;
    for (Side side : {Side::Worker, Side::Firm}) {
      for (int i = 0; i < c.size(side); ++i) {
        if (embedding->is_phantom({side, i})) learner->set_known_order({side, i}, c.prefs({side, i}));
      }
    }
  }

  RunOptions run;
  run.learner_seed = a.seed;
  run.environment_seed = env_seed;
  run.max_rounds = a.max_rounds;
  const Transcript tr = run_protocol(*learner, *env, run);

  if (!a.transcript.empty()) write_text_file(a.transcript, write_transcript(tr));
  std::cout << "outcome=" << to_string(tr.outcome) << " queries=" << tr.queries() << " restarts=" << tr.restarts
            << '\n';
  if (tr.outcome == Outcome::Stable) {
    Matching final = *tr.final_matching();
    if (embedding) final = restrict_matching(*embedding, final);
    std::cout << "matching=" << format_matching(final) << '\n';
    return kExitOk;
  }
  if (tr.error) {
    std::cerr << "smlab: " << tr.message << '\n';
    return exit_code_for(*tr.error);
  }
  std::cerr << "smlab: no stable matching within " << tr.max_rounds << " rounds\n";
  return kExitFailure;
}

std::string sibling_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + suffix + ".csv")).string();
}

int run_bench(const std::string& config_path, const std::string& out_path) {
  ExperimentConfig config = parse_experiment_config(read_text_file(config_path));
  config.learner_options.caps = caps_from_env();
  std::string out = out_path.empty() ? config.output : out_path;
  if (out.empty()) fail(ErrorCode::ConfigError, "no output path given");

  const BenchResult result = bench(config, [](const ExperimentRow& r) {
    if (r.outcome != Outcome::Stable) {
      std::cerr << "run " << r.run_id << " (" << r.learner << ", " << r.policy << ", n=" << r.n
                << ") ended with " << to_string(r.outcome) << '\n';
    }
  });

  std::ostringstream rows;
  write_rows_csv(rows, result.rows);
  write_text_file(out, rows.str());
  std::ostringstream summary;
  write_summary_csv(summary, result.cells);
  write_text_file(sibling_path(out, "_summary"), summary.str());
  std::ostringstream fits;
  write_fits_csv(fits, result.fits);
  write_text_file(sibling_path(out, "_fits"), fits.str());

  std::cout << summary.str() << fits.str();
  return result.any_error ? kExitProtocol : kExitOk;
}

Poset poset_from_args(int n, const std::string& relations) {
  const auto rel = parse_relations(relations);
  return Poset::from_relations(n, rel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive stable-matching learners, adversaries and exact oracles"};
  app.require_subcommand(1);

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "run one learner against one adversary");
  learn_cmd->add_option("--market", learn.market, "market file")->required();
  learn_cmd->add_option("--learner", learn.learner, "naive|rep-exact|rep-sampled|mm-simple|mm-exact|mm-sampled")
      ->required();
  learn_cmd->add_option("--adversary", learn.adversary, "lex|random|serial")->required();
  learn_cmd->add_option("--seed", learn.seed, "64-bit seed")->required();
  learn_cmd->add_option("--alpha", learn.alpha, "representativeness threshold for rep-exact");
  learn_cmd->add_option("--k", learn.k, "sample count for sampled learners");
  learn_cmd->add_option("--threshold", learn.threshold, "estimate threshold for rep-sampled");
  learn_cmd->add_option("--max-rounds", learn.max_rounds, "round limit");
  learn_cmd->add_option("--transcript", learn.transcript, "write the transcript here");

  std::string bench_config;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark grid from a JSON config");
  bench_cmd->add_option("--config", bench_config, "JSON config")->required();
  bench_cmd->add_option("--out", bench_out, "CSV output path");

  auto* oracle_cmd = app.add_subcommand("oracle", "exact oracles");
  oracle_cmd->require_subcommand(1);

  int ce_n = 0;
  std::string ce_rel;
  auto* ce = oracle_cmd->add_subcommand("count-extensions", "number of linear extensions of a poset");
  ce->add_option("--n", ce_n, "ground set size")->required();
  ce->add_option("--relations", ce_rel, "relations such as '0<1 2<3'");

  int pf_n = 0;
  int pf_a = 0;
  int pf_b = 0;
  std::string pf_rel;
  auto* pf = oracle_cmd->add_subcommand("pref-frac", "fraction of extensions ranking a ahead of b");
  pf->add_option("--n", pf_n, "ground set size")->required();
  pf->add_option("--relations", pf_rel, "relations such as '0<1 2<3'");
  pf->add_option("--a", pf_a)->required();
  pf->add_option("--b", pf_b)->required();

  int lf_n = 0;
  int lf_a = 0;
  std::vector<std::string> lf_constraints;
  std::string lf_remaining;
  auto* lf = oracle_cmd->add_subcommand("last-frac", "fraction of consistent orders ranking a last among R");
  lf->add_option("--n", lf_n, "ground set size")->required();
  lf->add_option("--constraint", lf_constraints, "constraint x:s1,s2 (x ahead of one of s1, s2); repeatable");
  lf->add_option("--remaining", lf_remaining, "the set R, e.g. 0,1,2 (default: all)");
  lf->add_option("--a", lf_a)->required();

  std::string sa_market;
  auto* sa = oracle_cmd->add_subcommand("stable-all", "every stable matching by exhaustive search");
  sa->add_option("--market", sa_market, "market file")->required();

  std::string sc_cnf;
  auto* sc = oracle_cmd->add_subcommand("sat-check", "compare truth-table satisfiability with the order reduction");
  sc->add_option("--cnf", sc_cnf, "DIMACS file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*learn_cmd) return run_learn(learn);
    if (*bench_cmd) return run_bench(bench_config, bench_out);

    const EnumerationCaps caps = caps_from_env();
    if (*ce) {
      std::cout << count_extensions_poset(poset_from_args(ce_n, ce_rel), caps.poset) << '\n';
    } else if (*pf) {
      const Fraction f = pref_frac(poset_from_args(pf_n, pf_rel), pf_a, pf_b, caps.poset);
      std::cout << f << '\n';
    } else if (*lf) {
      ConstraintSet cs(lf_n);
      for (const auto& c : lf_constraints) cs.add(parse_general_constraint(c));
      std::vector<int> r = parse_index_list(lf_remaining);
      if (r.empty()) {
        for (int i = 0; i < lf_n; ++i) r.push_back(i);
      }
      std::cout << last_frac(cs, r, lf_a, caps.general) << '\n';
    } else if (*sa) {
      const auto all = enumerate_stable_matchings(parse_market_file(read_text_file(sa_market)));
      for (const auto& m : all) std::cout << format_matching(m) << '\n';
      std::cout << "count=" << all.size() << '\n';
    } else if (*sc) {
      const Cnf cnf = parse_dimacs(read_text_file(sc_cnf));
      const bool by_table = satisfiable_by_truth_table(cnf);
      const bool by_order = decide_mixed_consistent(reduce_3sat(cnf), caps.mixed);
      if (by_table == by_order) {
        std::cout << (by_table ? "SAT" : "UNSAT") << " agrees\n";
      } else {
        std::cout << "DISAGREE truth-table=" << (by_table ? "SAT" : "UNSAT")
                  << " orders=" << (by_order ? "SAT" : "UNSAT") << '\n';
        return kExitFailure;
      }
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "smlab: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}
