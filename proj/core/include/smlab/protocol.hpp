#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smlab/environments.hpp"
#include "smlab/error.hpp"
#include "smlab/learners.hpp"
#include "smlab/market.hpp"

namespace smlab {

enum class Outcome { Stable, MaxRounds, Error };

std::string_view to_string(Outcome outcome);

struct RoundRecord {
  int t = 0;
  Matching proposal;
  QueryResponse response;
};

// Append-only record of one run.
struct Transcript {
  std::string learner;
  std::string policy;
  std::uint64_t learner_seed = 0;
  std::uint64_t environment_seed = 0;
  int n_workers = 0;
  int n_firms = 0;
  std::uint64_t max_rounds = 0;
  std::vector<RoundRecord> rounds;
  Outcome outcome = Outcome::Error;
  std::optional<ErrorCode> error;
  std::string message;
  int restarts = 0;

  int queries() const noexcept { return static_cast<int>(rounds.size()); }
  const Matching* final_matching() const noexcept { return rounds.empty() ? nullptr : &rounds.back().proposal; }
};

// 10 n^3 ceil(log2(n + 1)).
std::uint64_t default_max_rounds(int n);

struct RunOptions {
  std::uint64_t max_rounds = 0;  // 0 selects default_max_rounds
  std::uint64_t learner_seed = 0;
  std::uint64_t environment_seed = 0;
  // Called after every observed response.
  std::function<void(const RoundRecord&, const Learner&)> on_round;
};

// Hands the environment's public orders to the learner, then alternates
// propose and respond until Stable or the round limit. A Stable answer is
// re-checked against the environment's ground truth. Library errors end the
// run with outcome Error, the code, and the offending round in `message`.
Transcript run_protocol(Learner& learner, Environment& environment, const RunOptions& options = {});

std::string format_response(const QueryResponse& response);
std::string format_matching(const Matching& matching);
std::string write_transcript(const Transcript& transcript);
// Throws ParseError.
Transcript parse_transcript(std::string_view text);

}  // namespace smlab
