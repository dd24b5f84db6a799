#pragma once

#include <compare>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace smlab {

enum class Side : std::uint8_t { Worker = 0, Firm = 1 };

constexpr Side opposite(Side s) noexcept { return s == Side::Worker ? Side::Firm : Side::Worker; }
constexpr std::string_view side_letter(Side s) noexcept { return s == Side::Worker ? "W" : "F"; }

// Agents are ordered workers first, then by index.
struct AgentId {
  Side side = Side::Worker;
  int index = 0;

  auto operator<=>(const AgentId&) const = default;
};

constexpr AgentId worker(int i) noexcept { return {Side::Worker, i}; }
constexpr AgentId firm(int i) noexcept { return {Side::Firm, i}; }

// Indices of opposite-side agents, most preferred first. Agents missing from
// the list are unacceptable to the owner.
using Ranking = std::vector<int>;

struct Pair {
  int worker = 0;
  int firm = 0;

  auto operator<=>(const Pair&) const = default;
};

// Two-sided market with quotas and strict (possibly partial) preferences.
//
// Throughout the library an owner ranks every acceptable agent above every
// unacceptable one; this is the convention under which the phantom-agent
// completion preserves blocking pairs.
class Market {
 public:
  Market() = default;
  Market(int n_workers, int n_firms);

  int n_workers() const noexcept { return static_cast<int>(workers_.size()); }
  int n_firms() const noexcept { return static_cast<int>(firms_.size()); }
  int size(Side s) const noexcept { return s == Side::Worker ? n_workers() : n_firms(); }
  bool contains(AgentId a) const noexcept { return a.index >= 0 && a.index < size(a.side); }

  int quota(AgentId a) const { return data(a).quota; }
  // Throws QuotaOutOfRange unless 1 <= q <= size of the opposite side.
  void set_quota(AgentId a, int q);

  const Ranking& prefs(AgentId a) const { return data(a).prefs; }
  // Throws InvalidPreferences on duplicates or out-of-range entries.
  void set_prefs(AgentId a, Ranking ranking);

  // Position of `other` in a's list, or -1 if unacceptable.
  int rank(AgentId a, int other) const { return data(a).rank[static_cast<std::size_t>(other)]; }
  bool acceptable(AgentId a, int other) const { return rank(a, other) >= 0; }
  // a strictly prefers x over y (acceptable beats unacceptable).
  bool prefers(AgentId a, int x, int y) const;

  bool has_complete_lists() const noexcept;
  bool quotas_balanced() const noexcept;
  // Complete lists and balanced quotas.
  bool is_full() const noexcept { return has_complete_lists() && quotas_balanced(); }
  bool all_quotas_one() const noexcept;
  int max_quota() const noexcept;

  friend bool operator==(const Market& a, const Market& b);

 private:
  struct AgentData {
    int quota = 1;
    Ranking prefs;
    std::vector<int> rank;
  };

  const AgentData& data(AgentId a) const;
  AgentData& data(AgentId a);

  std::vector<AgentData> workers_;
  std::vector<AgentData> firms_;
};

// Set of worker-firm pairs, kept sorted and duplicate-free.
class Matching {
 public:
  Matching() = default;
  // Throws DuplicateEntry if a pair repeats.
  explicit Matching(std::vector<Pair> pairs);

  bool insert(Pair p);
  bool erase(Pair p);
  bool contains(Pair p) const;

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  // Partners of an agent, ascending.
  std::vector<int> partners(AgentId a) const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<Pair> pairs_;
};

struct Stable {
  friend bool operator==(const Stable&, const Stable&) = default;
};
struct Blocking {
  Pair pair;
  friend bool operator==(const Blocking&, const Blocking&) = default;
};
struct IndividuallyBlocking {
  AgentId agent;
  friend bool operator==(const IndividuallyBlocking&, const IndividuallyBlocking&) = default;
};
using QueryResponse = std::variant<Stable, Blocking, IndividuallyBlocking>;

// Partner lists indexed by agent, validated against a market.
struct PartnerTable {
  std::vector<std::vector<int>> of_worker;
  std::vector<std::vector<int>> of_firm;

  const std::vector<int>& of(AgentId a) const {
    return a.side == Side::Worker ? of_worker[static_cast<std::size_t>(a.index)]
                                  : of_firm[static_cast<std::size_t>(a.index)];
  }
};

// Throws UnknownAgent for out-of-range pairs and QuotaViolation when an agent
// holds more partners than its quota.
PartnerTable partner_table(const Market& market, const Matching& matching);

// Every agent holds exactly its quota of partners.
bool is_perfect(const Market& market, const Matching& matching);

// All pairs outside the matching that block it, sorted by (worker, firm).
std::vector<Pair> find_blocking_pairs(const Market& market, const Matching& matching);

// Agents matched to at least one partner they find unacceptable, sorted
// workers first then by index.
std::vector<AgentId> individually_blocking_agents(const Market& market, const Matching& matching);

bool is_stable(const Market& market, const Matching& matching);

}  // namespace smlab
