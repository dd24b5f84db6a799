#include "smlab/market_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "smlab/error.hpp"

namespace smlab {

namespace {

[[noreturn]] void parse_error(int line_no, const std::string& why) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

long long to_int(const std::string& tok, int line_no) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::logic_error&) {
    parse_error(line_no, "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size()) parse_error(line_no, "expected an integer, got '" + tok + "'");
  return v;
}

Side to_side(const std::string& tok, int line_no) {
  if (tok == "W") return Side::Worker;
  if (tok == "F") return Side::Firm;
  parse_error(line_no, "expected W or F, got '" + tok + "'");
}

std::string agent_name(AgentId a) { return std::string(side_letter(a.side)) + " " + std::to_string(a.index); }

AgentId agent_at(const Market& m, Side side, long long index, int line_no) {
  if (index < 0 || index >= m.size(side)) {
    fail(ErrorCode::IndexOutOfRange, "line " + std::to_string(line_no) + ": no agent " +
                                         std::string(side_letter(side)) + " " + std::to_string(index));
  }
  return {side, static_cast<int>(index)};
}

}  // namespace

Market parse_market_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool have_sides = false;
  Market market;
  std::set<AgentId> seen_quota;
  std::set<AgentId> seen_pref;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string keyword;
    if (!(line >> keyword)) continue;

    if (keyword == "sides:") {
      if (have_sides) fail(ErrorCode::DuplicateEntry, "line " + std::to_string(line_no) + ": repeated sides line");
      std::string w;
      std::string f;
      std::string extra;
      if (!(line >> w >> f) || (line >> extra) || w.rfind("W=", 0) != 0 || f.rfind("F=", 0) != 0) {
        parse_error(line_no, "expected 'sides: W=<int> F=<int>'");
      }
      const long long nw = to_int(w.substr(2), line_no);
      const long long nf = to_int(f.substr(2), line_no);
      if (nw < 0 || nf < 0) parse_error(line_no, "side sizes must be nonnegative");
      market = Market(static_cast<int>(nw), static_cast<int>(nf));
      have_sides = true;
      continue;
    }
    if (!have_sides) parse_error(line_no, "the sides line must come first");

    if (keyword == "quota") {
      std::string side;
      std::string index;
      std::string value;
      std::string extra;
      if (!(line >> side >> index >> value) || (line >> extra)) {
        parse_error(line_no, "expected 'quota (W|F) <index> <int>'");
      }
      const AgentId a = agent_at(market, to_side(side, line_no), to_int(index, line_no), line_no);
      if (!seen_quota.insert(a).second) {
        fail(ErrorCode::DuplicateEntry, "line " + std::to_string(line_no) + ": second quota for " + agent_name(a));
      }
      const long long q = to_int(value, line_no);
      if (q < 1 || q > market.size(opposite(a.side))) {
        fail(ErrorCode::QuotaOutOfRange, "line " + std::to_string(line_no) + ": quota " + std::to_string(q) +
                                             " for " + agent_name(a));
      }
      market.set_quota(a, static_cast<int>(q));
    } else if (keyword == "pref") {
      std::string side;
      std::string index;
      if (!(line >> side >> index) || index.empty() || index.back() != ':') {
        parse_error(line_no, "expected 'pref (W|F) <index>: ...'");
      }
      index.pop_back();
      const AgentId a = agent_at(market, to_side(side, line_no), to_int(index, line_no), line_no);
      if (!seen_pref.insert(a).second) {
        fail(ErrorCode::DuplicateEntry, "line " + std::to_string(line_no) + ": second pref line for " + agent_name(a));
      }
      Ranking ranking;
      std::set<int> used;
      std::string tok;
      while (line >> tok) {
        const AgentId other = agent_at(market, opposite(a.side), to_int(tok, line_no), line_no);
        if (!used.insert(other.index).second) {
          fail(ErrorCode::DuplicateEntry, "line " + std::to_string(line_no) + ": " + tok + " listed twice");
        }
        ranking.push_back(other.index);
      }
      market.set_prefs(a, std::move(ranking));
    } else {
      parse_error(line_no, "unknown keyword '" + keyword + "'");
    }
  }
  if (!have_sides) parse_error(line_no, "missing sides line");
  return market;
}

std::string write_market_file(const Market& market) {
  std::ostringstream out;
  out << "sides: W=" << market.n_workers() << " F=" << market.n_firms() << '\n';
  for (Side side : {Side::Worker, Side::Firm}) {
    for (int i = 0; i < market.size(side); ++i) {
      const int q = market.quota({side, i});
      if (q != 1) out << "quota " << side_letter(side) << ' ' << i << ' ' << q << '\n';
    }
  }
  for (Side side : {Side::Worker, Side::Firm}) {
    for (int i = 0; i < market.size(side); ++i) {
      out << "pref " << side_letter(side) << ' ' << i << ':';
      for (int x : market.prefs({side, i})) out << ' ' << x;
      out << '\n';
    }
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace smlab
