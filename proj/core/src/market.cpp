#include "smlab/market.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "smlab/error.hpp"

namespace smlab {

namespace {

std::string agent_name(AgentId a) { return std::string(side_letter(a.side)) + std::to_string(a.index); }

}  // namespace

Market::Market(int n_workers, int n_firms) {
  if (n_workers < 0 || n_firms < 0) fail(ErrorCode::InvalidPreferences, "negative market size");
  workers_.resize(static_cast<std::size_t>(n_workers));
  firms_.resize(static_cast<std::size_t>(n_firms));
  for (auto& w : workers_) w.rank.assign(static_cast<std::size_t>(n_firms), -1);
  for (auto& f : firms_) f.rank.assign(static_cast<std::size_t>(n_workers), -1);
}

const Market::AgentData& Market::data(AgentId a) const {
  if (!contains(a)) fail(ErrorCode::UnknownAgent, agent_name(a));
  return a.side == Side::Worker ? workers_[static_cast<std::size_t>(a.index)]
                                : firms_[static_cast<std::size_t>(a.index)];
}

Market::AgentData& Market::data(AgentId a) {
  return const_cast<AgentData&>(static_cast<const Market&>(*this).data(a));
}

void Market::set_quota(AgentId a, int q) {
  auto& d = data(a);
  if (q < 1 || q > size(opposite(a.side))) {
    fail(ErrorCode::QuotaOutOfRange, "quota " + std::to_string(q) + " for " + agent_name(a));
  }
  d.quota = q;
}

void Market::set_prefs(AgentId a, Ranking ranking) {
  auto& d = data(a);
  const int m = size(opposite(a.side));
  std::vector<int> rank(static_cast<std::size_t>(m), -1);
  for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
    const int other = ranking[pos];
    if (other < 0 || other >= m) {
      fail(ErrorCode::InvalidPreferences, "entry " + std::to_string(other) + " out of range for " + agent_name(a));
    }
    if (rank[static_cast<std::size_t>(other)] >= 0) {
      fail(ErrorCode::InvalidPreferences, "duplicate entry " + std::to_string(other) + " for " + agent_name(a));
    }
    rank[static_cast<std::size_t>(other)] = static_cast<int>(pos);
  }
  d.prefs = std::move(ranking);
  d.rank = std::move(rank);
}

bool Market::prefers(AgentId a, int x, int y) const {
  const int rx = rank(a, x);
  const int ry = rank(a, y);
  if (rx < 0) return false;
  return ry < 0 || rx < ry;
}

bool Market::has_complete_lists() const noexcept {
  for (const auto& w : workers_) {
    if (static_cast<int>(w.prefs.size()) != n_firms()) return false;
  }
  for (const auto& f : firms_) {
    if (static_cast<int>(f.prefs.size()) != n_workers()) return false;
  }
  return true;
}

bool Market::quotas_balanced() const noexcept {
  auto sum = [](const std::vector<AgentData>& v) {
    long long s = 0;
    for (const auto& d : v) s += d.quota;
    return s;
  };
  return sum(workers_) == sum(firms_);
}

bool Market::all_quotas_one() const noexcept {
  auto ones = [](const std::vector<AgentData>& v) {
    return std::all_of(v.begin(), v.end(), [](const AgentData& d) { return d.quota == 1; });
  };
  return ones(workers_) && ones(firms_);
}

int Market::max_quota() const noexcept {
  int q = 0;
  for (const auto& d : workers_) q = std::max(q, d.quota);
  for (const auto& d : firms_) q = std::max(q, d.quota);
  return q;
}

bool operator==(const Market& a, const Market& b) {
  auto same = [](const std::vector<Market::AgentData>& x, const std::vector<Market::AgentData>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].quota != y[i].quota || x[i].prefs != y[i].prefs) return false;
    }
    return true;
  };
  return same(a.workers_, b.workers_) && same(a.firms_, b.firms_);
}

Matching::Matching(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  if (std::adjacent_find(pairs_.begin(), pairs_.end()) != pairs_.end()) {
    fail(ErrorCode::DuplicateEntry, "matching lists a pair twice");
  }
}

bool Matching::insert(Pair p) {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
  if (it != pairs_.end() && *it == p) return false;
  pairs_.insert(it, p);
  return true;
}

bool Matching::erase(Pair p) {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
  if (it == pairs_.end() || *it != p) return false;
  pairs_.erase(it);
  return true;
}

bool Matching::contains(Pair p) const { return std::binary_search(pairs_.begin(), pairs_.end(), p); }

std::vector<int> Matching::partners(AgentId a) const {
  std::vector<int> out;
  for (const auto& p : pairs_) {
    if (a.side == Side::Worker && p.worker == a.index) out.push_back(p.firm);
    if (a.side == Side::Firm && p.firm == a.index) out.push_back(p.worker);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PartnerTable partner_table(const Market& market, const Matching& matching) {
  PartnerTable t;
  t.of_worker.resize(static_cast<std::size_t>(market.n_workers()));
  t.of_firm.resize(static_cast<std::size_t>(market.n_firms()));
  for (const auto& p : matching.pairs()) {
    if (p.worker < 0 || p.worker >= market.n_workers() || p.firm < 0 || p.firm >= market.n_firms()) {
      fail(ErrorCode::UnknownAgent,
           "pair (" + std::to_string(p.worker) + "," + std::to_string(p.firm) + ") out of range");
    }
    t.of_worker[static_cast<std::size_t>(p.worker)].push_back(p.firm);
    t.of_firm[static_cast<std::size_t>(p.firm)].push_back(p.worker);
  }
  for (int w = 0; w < market.n_workers(); ++w) {
    if (static_cast<int>(t.of_worker[static_cast<std::size_t>(w)].size()) > market.quota(worker(w))) {
      fail(ErrorCode::QuotaViolation, "worker " + std::to_string(w) + " exceeds quota");
    }
  }
  for (int f = 0; f < market.n_firms(); ++f) {
    if (static_cast<int>(t.of_firm[static_cast<std::size_t>(f)].size()) > market.quota(firm(f))) {
      fail(ErrorCode::QuotaViolation, "firm " + std::to_string(f) + " exceeds quota");
    }
  }
  return t;
}

bool is_perfect(const Market& market, const Matching& matching) {
  const auto t = partner_table(market, matching);
  for (int w = 0; w < market.n_workers(); ++w) {
    if (static_cast<int>(t.of(worker(w)).size()) != market.quota(worker(w))) return false;
  }
  for (int f = 0; f < market.n_firms(); ++f) {
    if (static_cast<int>(t.of(firm(f)).size()) != market.quota(firm(f))) return false;
  }
  return true;
}

namespace {

// Rank used for "is x preferred over the worst partner": unacceptable
// partners sit below everything acceptable.
constexpr int kUnacceptableRank = std::numeric_limits<int>::max();

// For each agent: the rank of its least preferred partner, or -1 when the
// agent still has a free slot (anything acceptable then improves on it).
std::vector<int> worst_partner_rank(const Market& market, const PartnerTable& t, Side side) {
  const int n = market.size(side);
  std::vector<int> worst(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const AgentId a{side, i};
    const auto& ps = t.of(a);
    if (static_cast<int>(ps.size()) < market.quota(a)) continue;
    int w = 0;
    for (int p : ps) {
      const int r = market.rank(a, p);
      w = std::max(w, r < 0 ? kUnacceptableRank : r);
    }
    worst[static_cast<std::size_t>(i)] = w;
  }
  return worst;
}

}  // namespace

std::vector<Pair> find_blocking_pairs(const Market& market, const Matching& matching) {
  const auto t = partner_table(market, matching);
  const auto worker_worst = worst_partner_rank(market, t, Side::Worker);
  const auto firm_worst = worst_partner_rank(market, t, Side::Firm);

  auto improves = [](int rank, int worst) { return worst < 0 || rank < worst; };

  std::vector<Pair> out;
  for (int w = 0; w < market.n_workers(); ++w) {
    for (int f = 0; f < market.n_firms(); ++f) {
      const int rw = market.rank(worker(w), f);
      const int rf = market.rank(firm(f), w);
      if (rw < 0 || rf < 0) continue;
      if (matching.contains({w, f})) continue;
      if (!improves(rf, firm_worst[static_cast<std::size_t>(f)])) continue;
      if (!improves(rw, worker_worst[static_cast<std::size_t>(w)])) continue;
      out.push_back({w, f});
    }
  }
  return out;
}

std::vector<AgentId> individually_blocking_agents(const Market& market, const Matching& matching) {
  const auto t = partner_table(market, matching);
  std::vector<AgentId> out;
  for (Side side : {Side::Worker, Side::Firm}) {
    for (int i = 0; i < market.size(side); ++i) {
      const AgentId a{side, i};
      const auto& ps = t.of(a);
      if (std::any_of(ps.begin(), ps.end(), [&](int p) { return !market.acceptable(a, p); })) out.push_back(a);
    }
  }
  return out;
}

bool is_stable(const Market& market, const Matching& matching) {
  return individually_blocking_agents(market, matching).empty() && find_blocking_pairs(market, matching).empty();
}

}  // namespace smlab
