#include "cli_util.hpp"

#include <sstream>

namespace smlab::cli {

namespace {

int to_index(const std::string& tok) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::logic_error&) {
    fail(ErrorCode::ParseError, "expected an index, got '" + tok + "'");
  }
  if (used != tok.size() || v < 0) fail(ErrorCode::ParseError, "expected an index, got '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ConfigError:
    case ErrorCode::DuplicateEntry:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::QuotaOutOfRange:
    case ErrorCode::InvalidPreferences:
    case ErrorCode::InvalidConstraint:
    case ErrorCode::MalformedClause:
    case ErrorCode::AlphaTooSmall:
    case ErrorCode::IoError:
    case ErrorCode::NotFull:
      return kExitConfig;
    case ErrorCode::TooLarge:
      return kExitCap;
    default:
      return kExitProtocol;
  }
}

std::vector<std::pair<int, int>> parse_relations(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  for (const auto& t : tokens(text)) {
    const auto lt = t.find('<');
    if (lt == std::string::npos) fail(ErrorCode::ParseError, "expected a<b, got '" + t + "'");
    out.emplace_back(to_index(t.substr(0, lt)), to_index(t.substr(lt + 1)));
  }
  return out;
}

GeneralConstraint parse_general_constraint(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorCode::ParseError, "expected x:s1,s2,..., got '" + text + "'");
  return make_constraint(to_index(text.substr(0, colon)), parse_index_list(text.substr(colon + 1)));
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& t : tokens(text)) out.push_back(to_index(t));
  return out;
}

}  // namespace smlab::cli
