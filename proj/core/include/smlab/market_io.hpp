#pragma once

#include <string>
#include <string_view>

#include "smlab/market.hpp"

namespace smlab {

// Line-oriented market format; '#' starts a comment.
//
//   sides: W=<int> F=<int>
//   quota (W|F) <index> <int>          optional, default 1
//   pref (W|F) <index>: <idx> <idx> ...  most preferred first; absent = empty
//
// Throws ParseError (with line number), DuplicateEntry, IndexOutOfRange or
// QuotaOutOfRange.
Market parse_market_file(std::string_view text);

// Inverse of parse_market_file; omits quota lines equal to 1.
std::string write_market_file(const Market& market);

// Reads a whole file. Throws IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace smlab
