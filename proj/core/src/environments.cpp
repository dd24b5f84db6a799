#include "smlab/environments.hpp"

#include <bit>
#include <numeric>
#include <span>

#include "smlab/error.hpp"

namespace smlab {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Lexicographic: return "lex";
    case PolicyKind::RandomUniform: return "random";
    case PolicyKind::SerialDictatorship: return "serial";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view text) {
  for (auto k : {PolicyKind::Lexicographic, PolicyKind::RandomUniform, PolicyKind::SerialDictatorship}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorCode::ConfigError, "unknown adversary '" + std::string(text) + "'");
}

QueryResponse respond(const Market& market, const Matching& matching, PolicyKind policy, Rng& rng) {
  if (policy == PolicyKind::SerialDictatorship) {
    fail(ErrorCode::ConfigError, "the serial-dictatorship policy needs its own environment");
  }
  const auto individual = individually_blocking_agents(market, matching);
  if (!individual.empty()) return IndividuallyBlocking{individual.front()};
  const auto pairs = find_blocking_pairs(market, matching);
  if (pairs.empty()) return Stable{};
  if (policy == PolicyKind::Lexicographic) return Blocking{pairs.front()};
  return Blocking{pairs[rng.uniform_below(pairs.size())]};
}

TruthfulEnvironment::TruthfulEnvironment(Market market, PolicyKind policy, std::uint64_t seed)
    : market_(std::move(market)), policy_(policy), rng_(seed) {
  if (policy == PolicyKind::SerialDictatorship) {
    fail(ErrorCode::ConfigError, "the serial-dictatorship policy needs its own environment");
  }
}

QueryResponse TruthfulEnvironment::respond(const Matching& matching) {
  return smlab::respond(market_, matching, policy_, rng_);
}

SerialDictatorshipEnvironment::SerialDictatorshipEnvironment(int n, std::uint64_t seed)
    : n_(n), shape_(n, n), rng_(seed) {
  if (n < 0 || n > kMaxPosetSize) fail(ErrorCode::TooLarge, "serial-dictatorship market of size " + std::to_string(n));
  men_.resize(static_cast<std::size_t>(n));
  for (auto& m : men_) {
    m.pred.assign(static_cast<std::size_t>(n), -1);
    m.succ.assign(static_cast<std::size_t>(n), -1);
  }
}

std::vector<std::pair<AgentId, Ranking>> SerialDictatorshipEnvironment::public_orders() const {
  Ranking men(static_cast<std::size_t>(n_));
  std::iota(men.begin(), men.end(), 0);
  std::vector<std::pair<AgentId, Ranking>> out;
  for (int w = 0; w < n_; ++w) out.emplace_back(firm(w), men);
  return out;
}

Mask SerialDictatorshipEnvironment::available(int man) const {
  Mask r = full_mask(n_);
  for (int j = 0; j < man; ++j) r &= ~bit(men_[static_cast<std::size_t>(j)].decided);
  return r;
}

std::optional<int> SerialDictatorshipEnvironment::decided(int man) const {
  const int d = men_.at(static_cast<std::size_t>(man)).decided;
  return d < 0 ? std::nullopt : std::optional<int>(d);
}

int SerialDictatorshipEnvironment::predecessor(int man, int w) const {
  return men_.at(static_cast<std::size_t>(man)).pred.at(static_cast<std::size_t>(w));
}

int SerialDictatorshipEnvironment::chain_count(int man) const {
  return std::popcount(available(man)) - men_.at(static_cast<std::size_t>(man)).edges;
}

void SerialDictatorshipEnvironment::decide(int man, int woman) {
  Man& m = men_[static_cast<std::size_t>(man)];
  const Mask r = available(man);
  // Revealed predecessors are immediate among r, so each chain stays
  // contiguous: woman's chain first, the other chains in uniform order.
  std::vector<int> heads;
  for (Mask x = r; x != 0; x &= x - 1) {
    const int w = std::countr_zero(x);
    if (m.pred[static_cast<std::size_t>(w)] < 0 && w != woman) heads.push_back(w);
  }
  rng_.shuffle(std::span<int>(heads));
  heads.insert(heads.begin(), woman);
  Ranking order;
  for (int h : heads) {
    for (int w = h; w >= 0; w = m.succ[static_cast<std::size_t>(w)]) order.push_back(w);
  }
  // Women outside r were never compared; interleave them uniformly.
  for (Mask x = full_mask(n_) & ~r; x != 0; x &= x - 1) {
    const auto at = rng_.uniform_below(order.size() + 1);
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(at), std::countr_zero(x));
  }
  m.order = std::move(order);
  m.decided = woman;
}

QueryResponse SerialDictatorshipEnvironment::respond(const Matching& matching) {
  const PartnerTable partners = partner_table(shape_, matching);
  if (!is_perfect(shape_, matching)) fail(ErrorCode::NotPerfect, "serial-dictatorship queries need perfect matchings");
  auto partner = [&](int man) { return partners.of_worker[static_cast<std::size_t>(man)][0]; };

  int frontier = 0;
  while (frontier < n_ && men_[static_cast<std::size_t>(frontier)].decided >= 0) ++frontier;

  for (int i = 0; i < frontier; ++i) {
    const Man& m = men_[static_cast<std::size_t>(i)];
    const int p = partner(i);
    if (p == m.decided) continue;
    // Immediate predecessor of p among the women still available to man i.
    const Mask r = available(i);
    int before = -1;
    for (int w : m.order) {
      if (w == p) break;
      if (r & bit(w)) before = w;
    }
    return Blocking{{i, before}};
  }

  for (int i = frontier; i < n_; ++i) {
    Man& m = men_[static_cast<std::size_t>(i)];
    const int p = partner(i);
    if (m.pred[static_cast<std::size_t>(p)] >= 0) return Blocking{{i, m.pred[static_cast<std::size_t>(p)]}};
    const int chains = chain_count(i);
    if (rng_.uniform_index(chains) != 0) {
      // p is not first; its predecessor is the tail of one of the other chains.
      int own_tail = p;
      while (m.succ[static_cast<std::size_t>(own_tail)] >= 0) own_tail = m.succ[static_cast<std::size_t>(own_tail)];
      std::vector<int> tails;
      for (Mask x = available(i); x != 0; x &= x - 1) {
        const int w = std::countr_zero(x);
        if (m.succ[static_cast<std::size_t>(w)] < 0 && w != own_tail) tails.push_back(w);
      }
      const int before = tails[static_cast<std::size_t>(rng_.uniform_index(static_cast<int>(tails.size())))];
      m.pred[static_cast<std::size_t>(p)] = before;
      m.succ[static_cast<std::size_t>(before)] = p;
      ++m.edges;
      return Blocking{{i, before}};
    }
    decide(i, p);
  }
  terminated_ = true;
  return Stable{};
}

Market SerialDictatorshipEnvironment::truth() const {
  const auto orders = realized_preferences();
  Market m(n_, n_);
  Ranking men(static_cast<std::size_t>(n_));
  std::iota(men.begin(), men.end(), 0);
  for (int i = 0; i < n_; ++i) {
    m.set_prefs(worker(i), orders[static_cast<std::size_t>(i)]);
    m.set_prefs(firm(i), men);
  }
  return m;
}

std::vector<Ranking> SerialDictatorshipEnvironment::realized_preferences() const {
  if (!terminated_) fail(ErrorCode::NotTerminated, "preferences are drawn only once the run ends");
  std::vector<Ranking> out;
  for (const auto& m : men_) out.push_back(m.order);
  return out;
}

}  // namespace smlab
