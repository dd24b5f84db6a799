#include "smlab/counting.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "smlab/error.hpp"

namespace smlab {

namespace {

void check_size(int n, int cap, std::string_view what) {
  const int limit = std::min(cap, kHardEnumerationLimit);
  if (n > limit) {
    fail(ErrorCode::TooLarge, std::string(what) + " on " + std::to_string(n) + " elements exceeds cap " +
                                  std::to_string(limit));
  }
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end || v <= 0) fail(ErrorCode::ConfigError, "bad cap value '" + std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Extensions of the elements outside each down-set, given the down-set comes first.
std::vector<std::uint64_t> backward_counts(const Poset& poset, const std::vector<std::uint64_t>& forward) {
  const int n = poset.size();
  const Mask full = full_mask(n);
  std::vector<std::uint64_t> back(forward.size(), 0);
  back[static_cast<std::size_t>(full)] = 1;
  for (Mask s = full; s-- > 0;) {
    if (forward[static_cast<std::size_t>(s)] == 0) continue;
    std::uint64_t total = 0;
    for (Mask m = full & ~s; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if ((poset.predecessors(x) & ~s) == 0) total += back[static_cast<std::size_t>(s | bit(x))];
    }
    back[static_cast<std::size_t>(s)] = total;
  }
  return back;
}

bool at_least(std::uint64_t count, std::uint64_t total, const Fraction& alpha) {
  using boost::multiprecision::cpp_int;
  return cpp_int(count) * denominator(alpha) >= numerator(alpha) * cpp_int(total);
}

}  // namespace

EnumerationCaps parse_caps(std::string_view text) {
  EnumerationCaps caps;
  text = trim(text);
  if (text.empty()) return caps;
  if (text.find('=') == std::string_view::npos) {
    const int v = parse_int(text);
    caps.poset = caps.general = caps.mixed = v;
    return caps;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::ConfigError, "expected key=value in '" + std::string(item) + "'");
    const std::string_view key = trim(item.substr(0, eq));
    const int v = parse_int(trim(item.substr(eq + 1)));
    if (key == "poset") {
      caps.poset = v;
    } else if (key == "general") {
      caps.general = v;
    } else if (key == "mixed") {
      caps.mixed = v;
    } else {
      fail(ErrorCode::ConfigError, "unknown cap '" + std::string(key) + "'");
    }
  }
  return caps;
}

EnumerationCaps caps_from_env() {
  const char* value = std::getenv("SMLAB_ENUM_CAP");
  return value == nullptr ? EnumerationCaps{} : parse_caps(value);
}

Fraction parse_decimal(std::string_view text) {
  text = trim(text);
  auto bad = [&] { fail(ErrorCode::ConfigError, "not a decimal number: '" + std::string(text) + "'"); };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = trim(text.substr(0, slash));
    const auto den = trim(text.substr(slash + 1));
    const auto digits = [](std::string_view s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (!digits(num) || !digits(den)) bad();
    boost::multiprecision::cpp_int d{std::string(den)};
    if (d == 0) bad();
    return Fraction(boost::multiprecision::cpp_int(std::string(num)), d);
  }
  boost::multiprecision::cpp_int num = 0;
  boost::multiprecision::cpp_int den = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (char c : text) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
    } else {
      bad();
    }
  }
  if (!seen_digit) bad();
  return Fraction(num, den);
}

double to_double(const Fraction& f) { return f.convert_to<double>(); }

DownsetTable::DownsetTable(const Poset& poset, int cap) : poset_(&poset) {
  const int n = poset.size();
  check_size(n, cap, "linear-extension count");
  const Mask full = full_mask(n);
  forward_.assign(static_cast<std::size_t>(full) + 1, 0);
  forward_[0] = 1;
  for (Mask s = 0; s <= full; ++s) {
    const std::uint64_t here = forward_[static_cast<std::size_t>(s)];
    if (here == 0) continue;
    for (Mask m = full & ~s; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if ((poset.predecessors(x) & ~s) == 0) forward_[static_cast<std::size_t>(s | bit(x))] += here;
    }
  }
}

ExtensionCount count_extensions_poset(const Poset& poset, int cap) {
  return ExtensionCount(DownsetTable(poset, cap).total());
}

PairwiseCounts pairwise_counts(const Poset& poset, int cap) {
  const int n = poset.size();
  const DownsetTable table(poset, cap);
  const auto& forward = table.counts();
  const auto back = backward_counts(poset, forward);

  PairwiseCounts out;
  out.n = n;
  out.total = table.total();
  out.before.assign(static_cast<std::size_t>(n * n), 0);
  const Mask full = full_mask(n);
  for (Mask s = 0; s <= full; ++s) {
    const std::uint64_t f = forward[static_cast<std::size_t>(s)];
    if (f == 0) continue;
    for (Mask m = full & ~s; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if ((poset.predecessors(x) & ~s) != 0) continue;
      const Mask next = s | bit(x);
      // Orders whose first |s| entries are s and whose next entry is x.
      const std::uint64_t w = f * back[static_cast<std::size_t>(next)];
      for (Mask later = full & ~next; later != 0; later &= later - 1) {
        out.before[static_cast<std::size_t>(x * n + std::countr_zero(later))] += w;
      }
    }
  }
  return out;
}

Fraction pref_frac(const Poset& poset, int a, int b, int cap) {
  const int n = poset.size();
  if (a < 0 || a >= n || b < 0 || b >= n || a == b) {
    fail(ErrorCode::IndexOutOfRange, "pref_frac needs two distinct elements of the ground set");
  }
  if (poset.precedes(a, b)) return Fraction(1);
  if (poset.precedes(b, a)) return Fraction(0);
  const auto counts = pairwise_counts(poset, cap);
  return Fraction(ExtensionCount(counts.at(a, b)), ExtensionCount(counts.total));
}

std::vector<std::pair<int, int>> representative_pairs(const PairwiseCounts& counts, const Fraction& alpha) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < counts.n; ++a) {
    for (int b = 0; b < counts.n; ++b) {
      if (a != b && at_least(counts.at(a, b), counts.total, alpha)) out.emplace_back(a, b);
    }
  }
  return out;
}

Ranking representative_order_exact(const Poset& poset, const Fraction& alpha, int cap) {
  if (alpha < Fraction(4, 5)) fail(ErrorCode::AlphaTooSmall, "alpha must be at least 0.8");
  const auto counts = pairwise_counts(poset, cap);
  Poset strong(poset.size());
  for (auto [a, b] : representative_pairs(counts, alpha)) {
    if (strong.precedes(b, a)) {
      fail(ErrorCode::CycleDetected, "representative relation has a cycle through " + std::to_string(a) + " and " +
                                         std::to_string(b));
    }
    strong.add(a, b);
  }
  return linear_extension(strong);
}

ConsistentOrderTable::ConsistentOrderTable(const ConstraintSet& constraints, int cap) : n_(constraints.size()) {
  check_size(n_, cap, "consistent-order count");
  blockers_.resize(static_cast<std::size_t>(n_));
  for (const auto& c : constraints.items()) {
    Mask m = 0;
    for (int s : c.set) m |= bit(s);
    blockers_[static_cast<std::size_t>(c.subject)].push_back(m);
  }
  const Mask full = full_mask(n_);
  const std::size_t cells = static_cast<std::size_t>(full) + 1;
  prefix_.assign(cells, 0);
  completion_.assign(cells, 0);
  prefix_[0] = 1;
  for (Mask p = 0; p <= full; ++p) {
    const std::uint64_t here = prefix_[static_cast<std::size_t>(p)];
    if (here == 0) continue;
    for (Mask m = full & ~p; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if (allowed(x, p)) prefix_[static_cast<std::size_t>(p | bit(x))] += here;
    }
  }
  completion_[static_cast<std::size_t>(full)] = 1;
  for (Mask p = full; p-- > 0;) {
    std::uint64_t total = 0;
    for (Mask m = full & ~p; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if (allowed(x, p)) total += completion_[static_cast<std::size_t>(p | bit(x))];
    }
    completion_[static_cast<std::size_t>(p)] = total;
  }
}

bool ConsistentOrderTable::allowed(int x, Mask placed) const {
  const auto& masks = blockers_[static_cast<std::size_t>(x)];
  return std::none_of(masks.begin(), masks.end(), [placed](Mask m) { return (m & placed) == m; });
}

std::uint64_t ConsistentOrderTable::last_count(Mask remaining, int a) const {
  const Mask full = full_mask(n_);
  const Mask before = remaining & ~bit(a);
  const Mask free = full & ~remaining;
  std::uint64_t total = 0;
  // Every subset of the free elements may precede a alongside R \ {a}.
  for (Mask t = free;; t = (t - 1) & free) {
    const Mask p = before | t;
    if (allowed(a, p)) total += prefix_[static_cast<std::size_t>(p)] * completion_[static_cast<std::size_t>(p | bit(a))];
    if (t == 0) break;
  }
  return total;
}

ExtensionCount count_consistent_general(const ConstraintSet& constraints, int cap) {
  return ExtensionCount(ConsistentOrderTable(constraints, cap).total());
}

Fraction last_frac(const ConstraintSet& constraints, std::span<const int> remaining, int a, int cap) {
  const ConsistentOrderTable table(constraints, cap);
  Mask r = 0;
  for (int x : remaining) {
    if (x < 0 || x >= table.size()) fail(ErrorCode::IndexOutOfRange, "remaining set outside ground set");
    r |= bit(x);
  }
  if (a < 0 || a >= table.size() || (r & bit(a)) == 0) {
    fail(ErrorCode::IndexOutOfRange, "element " + std::to_string(a) + " is not in the remaining set");
  }
  if (table.total() == 0) fail(ErrorCode::NoConsistentOrder, "no order satisfies the constraints");
  return Fraction(ExtensionCount(table.last_count(r, a)), ExtensionCount(table.total()));
}

}  // namespace smlab
