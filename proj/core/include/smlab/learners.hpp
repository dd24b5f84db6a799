#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "smlab/constraints.hpp"
#include "smlab/counting.hpp"
#include "smlab/linext_sampler.hpp"
#include "smlab/market.hpp"
#include "smlab/poset.hpp"
#include "smlab/rng.hpp"

namespace smlab {

enum class LearnerKind {
  Naive,
  RepresentativeExact,
  RepresentativeSampled,
  ManySimple,
  ManyLastFracExact,
  ManyLastFracSampled,
};

std::string_view to_string(LearnerKind kind);
// Accepts the CLI spellings: naive, rep-exact, rep-sampled, mm-simple,
// mm-exact, mm-sampled. Throws ConfigError.
LearnerKind parse_learner_kind(std::string_view text);
bool is_one_to_one(LearnerKind kind);

struct LearnerOptions {
  Fraction alpha{4, 5};
  SampleRankingOptions sampling;
  int many_samples = 0;  // 0 selects ceil(6 n^2 ln n)
  std::uint64_t rejection_budget = 1'000'000;
  EnumerationCaps caps = caps_from_env();
};

int default_many_sample_count(int n);

// Learner side of the protocol. Works on a full market whose quotas are
// known and whose preferences are not; the market passed in supplies only
// the dimensions and quotas.
class Learner {
 public:
  Learner(const Market& shape, std::uint64_t seed);
  virtual ~Learner() = default;

  Learner(const Learner&) = delete;
  Learner& operator=(const Learner&) = delete;

  virtual LearnerKind kind() const noexcept = 0;

  // Matching that is stable for the current speculative orders; perfect in
  // the one-to-one case.
  Matching propose();
  // Throws ProtocolViolation for individually blocking responses and for
  // blocks that reveal nothing, DuplicateConstraint in the many-to-many case.
  void observe(const QueryResponse& response);
  bool finished() const noexcept { return finished_; }

  // Fixes an agent's full order, for preferences the learner is told.
  void set_known_order(AgentId agent, const Ranking& order);

  int queries() const noexcept { return queries_; }
  int restarts() const noexcept { return restarts_; }
  // Total number of constraints held, summed over agents.
  std::size_t potential() const noexcept;

  const Market& shape() const noexcept { return shape_; }
  const Market& speculative_market() const noexcept { return speculative_; }
  const std::optional<Matching>& last_proposal() const noexcept { return last_; }
  const ConstraintSet& constraints(AgentId agent) const { return state(agent).constraints; }
  // Closed pairwise relation; maintained by the one-to-one learners only.
  const Poset& poset(AgentId agent) const { return state(agent).poset; }
  // Agents whose constraint set grew in the last observe().
  const std::vector<AgentId>& last_updated() const noexcept { return updated_; }

 protected:
  struct AgentState {
    ConstraintSet constraints;
    Poset poset;
    Ranking order;
    bool dirty = true;
    bool known = false;
  };

  virtual Ranking choose_order(AgentId agent, const AgentState& s) = 0;
  // Records what the block (w, f) reveals; returns the agents that changed.
  virtual std::vector<AgentId> absorb(int w, int f, const PartnerTable& partners) = 0;
  virtual bool pairwise() const noexcept = 0;

  AgentState& state(AgentId a);
  const AgentState& state(AgentId a) const;
  Rng& rng() noexcept { return rng_; }
  void add_restarts(int r) noexcept { restarts_ += r; }

 private:
  Market shape_;
  Market speculative_;
  std::vector<AgentState> agents_;
  std::optional<Matching> last_;
  std::vector<AgentId> updated_;
  Rng rng_;
  int queries_ = 0;
  int restarts_ = 0;
  bool finished_ = false;
};

// Throws NotFull if the shape is not a full market, or for one-to-one kinds
// if some quota exceeds one.
std::unique_ptr<Learner> make_learner(LearnerKind kind, const Market& shape, std::uint64_t seed,
                                      const LearnerOptions& options = {});

// Algorithm 5 ordering: fills positions from the back, each time taking the
// element of the remaining set that is most often last among it across
// consistent orders (smallest index on ties).
Ranking last_frac_order_exact(const ConstraintSet& constraints, int cap);
Ranking last_frac_order_sampled(const ConstraintSet& constraints, Rng& rng, int samples, int cap,
                                std::uint64_t rejection_budget);

// Uniform consistent order by rejection from uniform permutations. Throws
// SamplerStarvation after `budget` failed attempts.
Ranking sample_consistent_rejection(const ConstraintSet& constraints, Rng& rng, std::uint64_t budget);

}  // namespace smlab
