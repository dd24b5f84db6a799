#pragma once

#include <optional>
#include <vector>

#include "smlab/market.hpp"

namespace smlab {

// Half-open range of opposite-side indices in the completed market.
struct PhantomRange {
  int begin = 0;
  int end = 0;

  int size() const noexcept { return end - begin; }
  bool contains(int i) const noexcept { return i >= begin && i < end; }
};

// A market with partial lists embedded into a full market by adding, for
// each agent a, q(a) quota-1 phantom agents on the opposite side.
//
// Layout of the completed market: real agents keep their indices; phantom
// firms follow the real firms grouped by owning worker (ascending), phantom
// workers follow the real workers grouped by owning firm.
struct MarketEmbedding {
  Market original;
  Market completed;
  std::vector<PhantomRange> worker_phantoms;  // phantom firms owned by each worker
  std::vector<PhantomRange> firm_phantoms;    // phantom workers owned by each firm

  // `a` is an agent of the completed market.
  bool is_phantom(AgentId a) const noexcept;
  // Real owner of a phantom agent, in original indices.
  std::optional<AgentId> owner(AgentId phantom) const;
  const PhantomRange& phantoms_of(AgentId real) const;
};

// Phantoms rank their owner first, then every other agent of the owner's
// side by ascending index. A real agent's list is extended by its own
// phantoms (ascending), then all remaining agents by ascending index.
MarketEmbedding complete_market(const Market& market);

// Fills every real agent's free slots with its most preferred phantoms and
// pairs the leftover phantoms by worker-proposing deferred acceptance.
Matching extend_matching(const MarketEmbedding& embedding, const Matching& matching);

// Drops every pair that involves a phantom. Throws NotPerfect if the input
// is not perfect and PhantomBlock if two phantoms block it.
Matching restrict_matching(const MarketEmbedding& embedding, const Matching& full_matching);

}  // namespace smlab
