#include "smlab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smlab/deferred_acceptance.hpp"
#include "smlab/error.hpp"

namespace smlab {

namespace {

std::vector<AgentId> all_agents(const Market& m) {
  std::vector<AgentId> out;
  for (int i = 0; i < m.n_workers(); ++i) out.push_back(worker(i));
  for (int i = 0; i < m.n_firms(); ++i) out.push_back(firm(i));
  return out;
}

std::vector<Mask> poset_key(const Poset& p) {
  std::vector<Mask> key(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) key[static_cast<std::size_t>(i)] = p.successors(i);
  return key;
}

int argmax_smallest(const std::vector<std::uint64_t>& score, Mask candidates) {
  int best = -1;
  for (Mask m = candidates; m != 0; m &= m - 1) {
    const int x = std::countr_zero(m);
    if (best < 0 || score[static_cast<std::size_t>(x)] > score[static_cast<std::size_t>(best)]) best = x;
  }
  return best;
}

// One-to-one learners: every block yields pairwise comparisons.
class PairwiseLearner : public Learner {
 public:
  using Learner::Learner;

 protected:
  bool pairwise() const noexcept override { return true; }

  std::vector<AgentId> absorb(int w, int f, const PartnerTable& partners) override {
    std::vector<AgentId> changed;
    const int pw = partners.of_worker[static_cast<std::size_t>(w)].at(0);
    const int pf = partners.of_firm[static_cast<std::size_t>(f)].at(0);
    if (learn(worker(w), f, pw)) changed.push_back(worker(w));
    if (learn(firm(f), w, pf)) changed.push_back(firm(f));
    if (changed.empty()) {
      fail(ErrorCode::ProtocolViolation, "block (w" + std::to_string(w) + ", f" + std::to_string(f) +
                                             ") contradicts nothing the learner believed");
    }
    return changed;
  }

 private:
  bool learn(AgentId agent, int better, int worse) {
    AgentState& s = state(agent);
    if (s.poset.precedes(better, worse)) return false;
    if (s.poset.precedes(worse, better)) {
      fail(ErrorCode::ProtocolViolation, "response contradicts an earlier response for agent " +
                                             std::string(side_letter(agent.side)) + std::to_string(agent.index));
    }
    s.poset.add(better, worse);
    s.constraints.add({better, {worse}});
    return true;
  }
};

class NaiveLearner final : public PairwiseLearner {
 public:
  using PairwiseLearner::PairwiseLearner;
  LearnerKind kind() const noexcept override { return LearnerKind::Naive; }

 protected:
  Ranking choose_order(AgentId, const AgentState& s) override { return generalized_toposort(s.constraints); }
};

class RepresentativeLearner final : public PairwiseLearner {
 public:
  RepresentativeLearner(const Market& shape, std::uint64_t seed, const LearnerOptions& options, bool sampled)
      : PairwiseLearner(shape, seed), options_(options), sampled_(sampled) {
    options_.sampling.exact_cap = options_.caps.poset;
    if (!sampled_ && options_.alpha < Fraction(4, 5)) fail(ErrorCode::AlphaTooSmall, "alpha must be at least 0.8");
  }

  LearnerKind kind() const noexcept override {
    return sampled_ ? LearnerKind::RepresentativeSampled : LearnerKind::RepresentativeExact;
  }

 protected:
  Ranking choose_order(AgentId, const AgentState& s) override {
    if (s.poset.is_total()) return linear_extension(s.poset);
    if (sampled_) {
      auto result = sample_ranking(s.poset, rng(), options_.sampling);
      add_restarts(result.restarts);
      return std::move(result.order);
    }
    auto key = poset_key(s.poset);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Ranking order = representative_order_exact(s.poset, options_.alpha, options_.caps.poset);
    cache_.emplace(std::move(key), order);
    return order;
  }

 private:
  LearnerOptions options_;
  bool sampled_;
  std::map<std::vector<Mask>, Ranking> cache_;
};

// Many-to-many learners: a block (w, f) says f beats some partner of w and
// w beats some partner of f.
class GeneralLearner : public Learner {
 public:
  using Learner::Learner;

 protected:
  bool pairwise() const noexcept override { return false; }

  // An agent below quota prefers any partner to its free slot, so the block
  // says nothing about its order.
  std::vector<AgentId> absorb(int w, int f, const PartnerTable& partners) override {
    std::vector<AgentId> changed;
    const auto& pw = partners.of_worker[static_cast<std::size_t>(w)];
    const auto& pf = partners.of_firm[static_cast<std::size_t>(f)];
    if (static_cast<int>(pw.size()) == shape().quota(worker(w)) &&
        state(worker(w)).constraints.add(make_constraint(f, pw))) {
      changed.push_back(worker(w));
    }
    if (static_cast<int>(pf.size()) == shape().quota(firm(f)) &&
        state(firm(f)).constraints.add(make_constraint(w, pf))) {
      changed.push_back(firm(f));
    }
    if (changed.empty()) {
      fail(ErrorCode::DuplicateConstraint,
           "block (w" + std::to_string(w) + ", f" + std::to_string(f) + ") repeats known constraints");
    }
    return changed;
  }
};

class ManySimpleLearner final : public GeneralLearner {
 public:
  using GeneralLearner::GeneralLearner;
  LearnerKind kind() const noexcept override { return LearnerKind::ManySimple; }

 protected:
  Ranking choose_order(AgentId, const AgentState& s) override { return generalized_toposort(s.constraints); }
};

class ManyLastFracLearner final : public GeneralLearner {
 public:
  ManyLastFracLearner(const Market& shape, std::uint64_t seed, const LearnerOptions& options, bool sampled)
      : GeneralLearner(shape, seed), options_(options), sampled_(sampled) {
    if (!sampled_) {
      const int n = std::max(shape.n_workers(), shape.n_firms());
      if (n > std::min(options_.caps.general, kHardEnumerationLimit)) {
        fail(ErrorCode::TooLarge, "exact last-fraction learner needs at most " + std::to_string(options_.caps.general) +
                                      " agents per side");
      }
    }
  }

  LearnerKind kind() const noexcept override {
    return sampled_ ? LearnerKind::ManyLastFracSampled : LearnerKind::ManyLastFracExact;
  }

 protected:
  Ranking choose_order(AgentId, const AgentState& s) override {
    if (sampled_) {
      return last_frac_order_sampled(s.constraints, rng(), options_.many_samples, options_.caps.general,
                                     options_.rejection_budget);
    }
    return last_frac_order_exact(s.constraints, options_.caps.general);
  }

 private:
  LearnerOptions options_;
  bool sampled_;
};

}  // namespace

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::Naive: return "naive";
    case LearnerKind::RepresentativeExact: return "rep-exact";
    case LearnerKind::RepresentativeSampled: return "rep-sampled";
    case LearnerKind::ManySimple: return "mm-simple";
    case LearnerKind::ManyLastFracExact: return "mm-exact";
    case LearnerKind::ManyLastFracSampled: return "mm-sampled";
  }
  return "unknown";
}

LearnerKind parse_learner_kind(std::string_view text) {
  for (auto k : {LearnerKind::Naive, LearnerKind::RepresentativeExact, LearnerKind::RepresentativeSampled,
                 LearnerKind::ManySimple, LearnerKind::ManyLastFracExact, LearnerKind::ManyLastFracSampled}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorCode::ConfigError, "unknown learner '" + std::string(text) + "'");
}

bool is_one_to_one(LearnerKind kind) {
  return kind == LearnerKind::Naive || kind == LearnerKind::RepresentativeExact ||
         kind == LearnerKind::RepresentativeSampled;
}

int default_many_sample_count(int n) {
  if (n < 2) return 0;
  const double nn = static_cast<double>(n);
  return static_cast<int>(std::ceil(6.0 * nn * nn * std::log(nn)));
}

Learner::Learner(const Market& shape, std::uint64_t seed) : shape_(shape.n_workers(), shape.n_firms()), rng_(seed) {
  for (AgentId a : all_agents(shape)) shape_.set_quota(a, shape.quota(a));
  speculative_ = shape_;
  for (AgentId a : all_agents(shape_)) {
    const int n = shape_.size(opposite(a.side));
    AgentState s;
    s.constraints = ConstraintSet(n);
    s.poset = Poset(std::min(n, kMaxPosetSize));
    agents_.push_back(std::move(s));
  }
}

Learner::AgentState& Learner::state(AgentId a) {
  if (!shape_.contains(a)) fail(ErrorCode::UnknownAgent, "agent outside the market");
  const std::size_t i = static_cast<std::size_t>(a.side == Side::Worker ? a.index : shape_.n_workers() + a.index);
  return agents_[i];
}

const Learner::AgentState& Learner::state(AgentId a) const {
  return const_cast<Learner*>(this)->state(a);
}

void Learner::set_known_order(AgentId agent, const Ranking& order) {
  AgentState& s = state(agent);
  const int n = shape_.size(opposite(agent.side));
  Ranking check = order;
  std::sort(check.begin(), check.end());
  Ranking identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  if (check != identity) fail(ErrorCode::InvalidPreferences, "known order must rank every opposite agent once");
  for (std::size_t i = 1; i < order.size(); ++i) {
    s.constraints.add({order[i - 1], {order[i]}});
    if (pairwise()) s.poset.add(order[i - 1], order[i]);
  }
  s.order = order;
  s.known = true;
  s.dirty = true;
}

std::size_t Learner::potential() const noexcept {
  std::size_t total = 0;
  for (const auto& s : agents_) total += s.constraints.count();
  return total;
}

Matching Learner::propose() {
  for (AgentId a : all_agents(shape_)) {
    AgentState& s = state(a);
    if (!s.dirty) continue;
    if (!s.known) {
      try {
        s.order = choose_order(a, s);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::NoConsistentOrder) {
          fail(ErrorCode::ProtocolViolation, std::string("constraints admit no order: ") + e.what());
        }
        throw;
      }
    }
    speculative_.set_prefs(a, s.order);
    s.dirty = false;
  }
  Matching m = shape_.all_quotas_one() && shape_.n_workers() == shape_.n_firms()
                   ? gale_shapley_one_to_one(speculative_)
                   : deferred_acceptance_many(speculative_);
  ++queries_;
  last_ = m;
  return m;
}

void Learner::observe(const QueryResponse& response) {
  if (!last_) fail(ErrorCode::ProtocolViolation, "response received before any proposal");
  updated_.clear();
  if (std::holds_alternative<Stable>(response)) {
    finished_ = true;
    return;
  }
  if (const auto* ib = std::get_if<IndividuallyBlocking>(&response)) {
    fail(ErrorCode::ProtocolViolation, "individually blocking agent " + std::string(side_letter(ib->agent.side)) +
                                           std::to_string(ib->agent.index) + " reported for a full market");
  }
  const Pair p = std::get<Blocking>(response).pair;
  if (!shape_.contains(worker(p.worker)) || !shape_.contains(firm(p.firm))) {
    fail(ErrorCode::ProtocolViolation, "blocking pair names an unknown agent");
  }
  if (last_->contains(p)) fail(ErrorCode::ProtocolViolation, "blocking pair is part of the proposed matching");
  const PartnerTable partners = partner_table(shape_, *last_);
  updated_ = absorb(p.worker, p.firm, partners);
  for (AgentId a : updated_) state(a).dirty = true;
}

std::unique_ptr<Learner> make_learner(LearnerKind kind, const Market& shape, std::uint64_t seed,
                                      const LearnerOptions& options) {
  if (!shape.quotas_balanced()) fail(ErrorCode::NotFull, "learners need balanced quotas");
  if (is_one_to_one(kind) && (!shape.all_quotas_one() || shape.n_workers() != shape.n_firms())) {
    fail(ErrorCode::NotFull, std::string(to_string(kind)) + " needs a one-to-one market");
  }
  switch (kind) {
    case LearnerKind::Naive: return std::make_unique<NaiveLearner>(shape, seed);
    case LearnerKind::RepresentativeExact: return std::make_unique<RepresentativeLearner>(shape, seed, options, false);
    case LearnerKind::RepresentativeSampled: return std::make_unique<RepresentativeLearner>(shape, seed, options, true);
    case LearnerKind::ManySimple: return std::make_unique<ManySimpleLearner>(shape, seed);
    case LearnerKind::ManyLastFracExact: return std::make_unique<ManyLastFracLearner>(shape, seed, options, false);
    case LearnerKind::ManyLastFracSampled: return std::make_unique<ManyLastFracLearner>(shape, seed, options, true);
  }
  fail(ErrorCode::ConfigError, "unknown learner kind");
}

Ranking last_frac_order_exact(const ConstraintSet& constraints, int cap) {
  const ConsistentOrderTable table(constraints, cap);
  if (table.total() == 0) fail(ErrorCode::NoConsistentOrder, "no order satisfies the constraints");
  const int n = constraints.size();
  Ranking order(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> score(static_cast<std::size_t>(n));
  Mask remaining = full_mask(n);
  for (int slot = n - 1; slot >= 0; --slot) {
    for (Mask m = remaining; m != 0; m &= m - 1) {
      const int a = std::countr_zero(m);
      score[static_cast<std::size_t>(a)] = table.last_count(remaining, a);
    }
    const int pick = argmax_smallest(score, remaining);
    order[static_cast<std::size_t>(slot)] = pick;
    remaining &= ~bit(pick);
  }
  return order;
}

Ranking sample_consistent_rejection(const ConstraintSet& constraints, Rng& rng, std::uint64_t budget) {
  Ranking order(static_cast<std::size_t>(constraints.size()));
  for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<int>(order));
    if (is_consistent(order, constraints)) return order;
  }
  fail(ErrorCode::SamplerStarvation, "no consistent order after " + std::to_string(budget) + " uniform draws");
}

Ranking last_frac_order_sampled(const ConstraintSet& constraints, Rng& rng, int samples, int cap,
                                std::uint64_t rejection_budget) {
  const int n = constraints.size();
  const int k = samples > 0 ? samples : default_many_sample_count(n);
  std::unique_ptr<ConsistentOrderTable> table;
  if (n <= std::min(cap, kHardEnumerationLimit)) {
    table = std::make_unique<ConsistentOrderTable>(constraints, cap);
    if (table->total() == 0) fail(ErrorCode::NoConsistentOrder, "no order satisfies the constraints");
  }
  Ranking order(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> score(static_cast<std::size_t>(n));
  std::vector<int> pos(static_cast<std::size_t>(n));
  Mask remaining = full_mask(n);
  for (int slot = n - 1; slot >= 0; --slot) {
    std::fill(score.begin(), score.end(), 0);
    // Fresh samples for every position.
    for (int draw = 0; draw < k && std::popcount(remaining) > 1; ++draw) {
      const Ranking sample = table ? table->sample(rng) : sample_consistent_rejection(constraints, rng, rejection_budget);
      int last = -1;
      for (int x : sample) {
        if (remaining & bit(x)) last = x;
      }
      ++score[static_cast<std::size_t>(last)];
    }
    const int pick = argmax_smallest(score, remaining);
    order[static_cast<std::size_t>(slot)] = pick;
    remaining &= ~bit(pick);
  }
  return order;
}

}  // namespace smlab
