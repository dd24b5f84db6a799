#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smlab/constraints.hpp"
#include "smlab/error.hpp"

namespace smlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitProtocol = 3;
inline constexpr int kExitCap = 4;

int exit_code_for(ErrorCode code);

// "0<1 2<3" or "0<1,2<3".
std::vector<std::pair<int, int>> parse_relations(const std::string& text);
// "x:s1,s2": x precedes at least one of s1, s2.
GeneralConstraint parse_general_constraint(const std::string& text);
// "0,1,2" or "0 1 2".
std::vector<int> parse_index_list(const std::string& text);

}  // namespace smlab::cli
