#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "smlab/market.hpp"
#include "smlab/poset.hpp"
#include "smlab/rng.hpp"

namespace smlab {

enum class PolicyKind { Lexicographic, RandomUniform, SerialDictatorship };

std::string_view to_string(PolicyKind kind);
// Accepts lex, random, serial. Throws ConfigError.
PolicyKind parse_policy_kind(std::string_view text);

// Stable, else the smallest individually blocking agent, else one blocking
// pair: the first in lexicographic order, or a uniform one. Throws
// QuotaViolation. `policy` must not be SerialDictatorship.
QueryResponse respond(const Market& market, const Matching& matching, PolicyKind policy, Rng& rng);

// Answering side of the protocol.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual PolicyKind policy() const noexcept = 0;
  virtual QueryResponse respond(const Matching& matching) = 0;
  // Dimensions and quotas shared with the learner.
  virtual const Market& shape() const noexcept = 0;
  // Preferences the learner is allowed to know in advance.
  virtual std::vector<std::pair<AgentId, Ranking>> public_orders() const { return {}; }
  // Ground truth for verifying a claimed stable matching.
  virtual Market truth() const = 0;
};

class TruthfulEnvironment final : public Environment {
 public:
  TruthfulEnvironment(Market market, PolicyKind policy, std::uint64_t seed);

  PolicyKind policy() const noexcept override { return policy_; }
  QueryResponse respond(const Matching& matching) override;
  const Market& shape() const noexcept override { return market_; }
  Market truth() const override { return market_; }

 private:
  Market market_;
  PolicyKind policy_;
  Rng rng_;
};

// Lower-bound adversary with deferred decisions. Men are workers, women are
// firms; every woman ranks the men by ascending index and this is public.
// Each man's order is uniformly random but drawn only as far as responses
// force it: man i's revealed constraints form disjoint chains of immediate
// predecessors over the women still available to him.
class SerialDictatorshipEnvironment final : public Environment {
 public:
  SerialDictatorshipEnvironment(int n, std::uint64_t seed);

  PolicyKind policy() const noexcept override { return PolicyKind::SerialDictatorship; }
  // Throws QuotaViolation or NotPerfect.
  QueryResponse respond(const Matching& matching) override;
  const Market& shape() const noexcept override { return shape_; }
  std::vector<std::pair<AgentId, Ranking>> public_orders() const override;
  // Throws NotTerminated before Stable has been declared.
  Market truth() const override;

  int size() const noexcept { return n_; }
  bool terminated() const noexcept { return terminated_; }
  // Woman fixed as man i's serial-dictatorship partner, if decided.
  std::optional<int> decided(int man) const;
  // Revealed immediate predecessor of woman w for man i, or -1.
  int predecessor(int man, int w) const;
  // Number of chains over the women still available to man i.
  int chain_count(int man) const;
  // Every man's full order. Throws NotTerminated.
  std::vector<Ranking> realized_preferences() const;

 private:
  struct Man {
    std::vector<int> pred;
    std::vector<int> succ;
    int edges = 0;
    int decided = -1;
    Ranking order;  // complete once decided
  };

  Mask available(int man) const;
  void decide(int man, int woman);

  int n_;
  Market shape_;
  std::vector<Man> men_;
  Rng rng_;
  bool terminated_ = false;
};

}  // namespace smlab
