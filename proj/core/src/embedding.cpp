#include "smlab/embedding.hpp"

#include <algorithm>
#include <string>

#include "smlab/deferred_acceptance.hpp"
#include "smlab/error.hpp"

namespace smlab {

bool MarketEmbedding::is_phantom(AgentId a) const noexcept {
  return a.side == Side::Worker ? a.index >= original.n_workers() : a.index >= original.n_firms();
}

std::optional<AgentId> MarketEmbedding::owner(AgentId phantom) const {
  if (!is_phantom(phantom)) return std::nullopt;
  // Phantom workers belong to firms, phantom firms to workers.
  const auto& ranges = phantom.side == Side::Worker ? firm_phantoms : worker_phantoms;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (ranges[i].contains(phantom.index)) return AgentId{opposite(phantom.side), static_cast<int>(i)};
  }
  return std::nullopt;
}

const PhantomRange& MarketEmbedding::phantoms_of(AgentId real) const {
  const auto& ranges = real.side == Side::Worker ? worker_phantoms : firm_phantoms;
  return ranges.at(static_cast<std::size_t>(real.index));
}

MarketEmbedding complete_market(const Market& market) {
  MarketEmbedding e;
  e.original = market;
  const int nw = market.n_workers();
  const int nf = market.n_firms();

  int total_nf = nf;
  for (int w = 0; w < nw; ++w) {
    const int q = market.quota(worker(w));
    e.worker_phantoms.push_back({total_nf, total_nf + q});
    total_nf += q;
  }
  int total_nw = nw;
  for (int f = 0; f < nf; ++f) {
    const int q = market.quota(firm(f));
    e.firm_phantoms.push_back({total_nw, total_nw + q});
    total_nw += q;
  }

  Market full(total_nw, total_nf);

  // Acceptable agents, then own phantoms, then everything else ascending.
  auto extend_real = [&](AgentId a, const PhantomRange& own, int opposite_size) {
    Ranking r = market.prefs(a);
    std::vector<char> placed(static_cast<std::size_t>(opposite_size), 0);
    for (int x : r) placed[static_cast<std::size_t>(x)] = 1;
    for (int p = own.begin; p < own.end; ++p) {
      r.push_back(p);
      placed[static_cast<std::size_t>(p)] = 1;
    }
    for (int x = 0; x < opposite_size; ++x) {
      if (!placed[static_cast<std::size_t>(x)]) r.push_back(x);
    }
    full.set_prefs(a, std::move(r));
  };
  auto phantom_prefs = [](int owner, int opposite_size) {
    Ranking r{owner};
    for (int x = 0; x < opposite_size; ++x) {
      if (x != owner) r.push_back(x);
    }
    return r;
  };

  for (int w = 0; w < nw; ++w) {
    extend_real(worker(w), e.worker_phantoms[static_cast<std::size_t>(w)], total_nf);
    for (int p = e.worker_phantoms[static_cast<std::size_t>(w)].begin;
         p < e.worker_phantoms[static_cast<std::size_t>(w)].end; ++p) {
      full.set_prefs(firm(p), phantom_prefs(w, total_nw));
    }
  }
  for (int f = 0; f < nf; ++f) {
    extend_real(firm(f), e.firm_phantoms[static_cast<std::size_t>(f)], total_nw);
    for (int p = e.firm_phantoms[static_cast<std::size_t>(f)].begin;
         p < e.firm_phantoms[static_cast<std::size_t>(f)].end; ++p) {
      full.set_prefs(worker(p), phantom_prefs(f, total_nf));
    }
  }
  // Quotas are set after all lists so the opposite side has its final size.
  for (int w = 0; w < nw; ++w) full.set_quota(worker(w), market.quota(worker(w)));
  for (int f = 0; f < nf; ++f) full.set_quota(firm(f), market.quota(firm(f)));

  e.completed = std::move(full);
  return e;
}

Matching extend_matching(const MarketEmbedding& embedding, const Matching& matching) {
  const Market& m = embedding.original;
  const Market& full = embedding.completed;
  const auto table = partner_table(m, matching);

  Matching out = matching;
  std::vector<char> used_firm(static_cast<std::size_t>(full.n_firms()), 0);
  std::vector<char> used_worker(static_cast<std::size_t>(full.n_workers()), 0);

  for (int w = 0; w < m.n_workers(); ++w) {
    const auto& range = embedding.worker_phantoms[static_cast<std::size_t>(w)];
    const int free = m.quota(worker(w)) - static_cast<int>(table.of(worker(w)).size());
    for (int k = 0; k < free; ++k) {
      out.insert({w, range.begin + k});
      used_firm[static_cast<std::size_t>(range.begin + k)] = 1;
    }
  }
  for (int f = 0; f < m.n_firms(); ++f) {
    const auto& range = embedding.firm_phantoms[static_cast<std::size_t>(f)];
    const int free = m.quota(firm(f)) - static_cast<int>(table.of(firm(f)).size());
    for (int k = 0; k < free; ++k) {
      out.insert({range.begin + k, f});
      used_worker[static_cast<std::size_t>(range.begin + k)] = 1;
    }
  }

  std::vector<int> left_workers;
  std::vector<int> left_firms;
  for (int w = m.n_workers(); w < full.n_workers(); ++w) {
    if (!used_worker[static_cast<std::size_t>(w)]) left_workers.push_back(w);
  }
  for (int f = m.n_firms(); f < full.n_firms(); ++f) {
    if (!used_firm[static_cast<std::size_t>(f)]) left_firms.push_back(f);
  }
  if (left_workers.size() != left_firms.size()) {
    fail(ErrorCode::NotPerfect, "leftover phantom counts differ");
  }
  if (left_workers.empty()) return out;

  // One-to-one deferred acceptance among the leftovers, with each list
  // restricted to leftover agents in completed-market order.
  const int k = static_cast<int>(left_workers.size());
  Market sub(k, k);
  auto restrict_list = [](const Ranking& r, const std::vector<int>& keep) {
    Ranking out;
    for (int x : r) {
      auto it = std::lower_bound(keep.begin(), keep.end(), x);
      if (it != keep.end() && *it == x) out.push_back(static_cast<int>(it - keep.begin()));
    }
    return out;
  };
  for (int i = 0; i < k; ++i) {
    sub.set_prefs(worker(i), restrict_list(full.prefs(worker(left_workers[static_cast<std::size_t>(i)])), left_firms));
    sub.set_prefs(firm(i), restrict_list(full.prefs(firm(left_firms[static_cast<std::size_t>(i)])), left_workers));
  }
  const Matching inner = gale_shapley_one_to_one(sub, Side::Worker);
  for (const auto& p : inner.pairs()) {
    out.insert({left_workers[static_cast<std::size_t>(p.worker)], left_firms[static_cast<std::size_t>(p.firm)]});
  }
  return out;
}

Matching restrict_matching(const MarketEmbedding& embedding, const Matching& full_matching) {
  const Market& full = embedding.completed;
  if (!is_perfect(full, full_matching)) fail(ErrorCode::NotPerfect, "matching is not perfect in the completed market");
  for (const auto& p : find_blocking_pairs(full, full_matching)) {
    if (embedding.is_phantom(worker(p.worker)) && embedding.is_phantom(firm(p.firm))) {
      fail(ErrorCode::PhantomBlock,
           "phantoms (" + std::to_string(p.worker) + "," + std::to_string(p.firm) + ") block the matching");
    }
  }
  Matching out;
  for (const auto& p : full_matching.pairs()) {
    if (!embedding.is_phantom(worker(p.worker)) && !embedding.is_phantom(firm(p.firm))) out.insert(p);
  }
  return out;
}

}  // namespace smlab
