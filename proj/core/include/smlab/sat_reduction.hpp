#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smlab/constraints.hpp"
#include "smlab/counting.hpp"

namespace smlab {

// CNF over variables 1..num_vars. A literal is +i or -i.
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

// DIMACS "p cnf V M" text. Throws ParseError or MalformedClause.
Cnf parse_dimacs(std::string_view text);
std::string write_dimacs(const Cnf& cnf);

// Orders of {0..n-1} restricted by precede constraints ("subject ahead of at
// least one of set") and follow constraints ("subject behind at least one of
// set").
struct MixedInstance {
  int n = 0;
  std::vector<GeneralConstraint> precede;
  std::vector<GeneralConstraint> follow;
};

// Element layout: literal x_i is 2(i-1), its negation 2(i-1)+1, and the
// pivot element is 2v. Throws MalformedClause for empty clauses, clauses
// with more than three literals, or literals naming unknown variables.
MixedInstance reduce_3sat(const Cnf& cnf);

inline constexpr int positive_literal_element(int var) { return 2 * (var - 1); }
inline constexpr int negative_literal_element(int var) { return 2 * (var - 1) + 1; }
inline constexpr int pivot_element(int num_vars) { return 2 * num_vars; }

bool satisfies_mixed(std::span<const int> order, const MixedInstance& instance);

// Exact decision by a reachability table over placed prefixes.
// Throws TooLarge above `cap` elements.
bool decide_mixed_consistent(const MixedInstance& instance, int cap = kDefaultMixedCap);

bool satisfiable_by_truth_table(const Cnf& cnf);

}  // namespace smlab
