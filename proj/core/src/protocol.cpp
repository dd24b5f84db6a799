#include "smlab/protocol.hpp"

#include <cmath>
#include <sstream>

namespace smlab {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Stable: return "stable";
    case Outcome::MaxRounds: return "max_rounds";
    case Outcome::Error: return "error";
  }
  return "error";
}

std::uint64_t default_max_rounds(int n) {
  const auto nn = static_cast<std::uint64_t>(std::max(n, 1));
  const auto lg = static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(nn) + 1.0)));
  return 10 * nn * nn * nn * lg;
}

Transcript run_protocol(Learner& learner, Environment& environment, const RunOptions& options) {
  Transcript tr;
  tr.learner = std::string(to_string(learner.kind()));
  tr.policy = std::string(to_string(environment.policy()));
  tr.learner_seed = options.learner_seed;
  tr.environment_seed = options.environment_seed;
  tr.n_workers = environment.shape().n_workers();
  tr.n_firms = environment.shape().n_firms();
  tr.max_rounds = options.max_rounds > 0 ? options.max_rounds
                                         : default_max_rounds(std::max(tr.n_workers, tr.n_firms));
  int t = 0;
  try {
    for (const auto& [agent, order] : environment.public_orders()) learner.set_known_order(agent, order);
    while (static_cast<std::uint64_t>(t) < tr.max_rounds) {
      ++t;
      Matching proposal = learner.propose();
      QueryResponse response = environment.respond(proposal);
      tr.rounds.push_back({t, std::move(proposal), response});
      learner.observe(response);
      if (options.on_round) options.on_round(tr.rounds.back(), learner);
      if (std::holds_alternative<Stable>(response)) {
        if (!is_stable(environment.truth(), tr.rounds.back().proposal)) {
          fail(ErrorCode::ProtocolViolation, "environment declared an unstable matching stable");
        }
        tr.outcome = Outcome::Stable;
        break;
      }
    }
    if (tr.outcome != Outcome::Stable) tr.outcome = Outcome::MaxRounds;
  } catch (const Error& e) {
    tr.outcome = Outcome::Error;
    tr.error = e.code();
    tr.message = "round " + std::to_string(t) + ": " + e.what();
  }
  tr.restarts = learner.restarts();
  return tr;
}

std::string format_response(const QueryResponse& response) {
  if (std::holds_alternative<Stable>(response)) return "stable";
  if (const auto* b = std::get_if<Blocking>(&response)) {
    return "block " + std::to_string(b->pair.worker) + " " + std::to_string(b->pair.firm);
  }
  const auto& ib = std::get<IndividuallyBlocking>(response);
  return "iblock " + std::string(side_letter(ib.agent.side)) + " " + std::to_string(ib.agent.index);
}

std::string format_matching(const Matching& matching) {
  std::string out = "[";
  bool first = true;
  for (const Pair& p : matching.pairs()) {
    if (!first) out += ',';
    first = false;
    out += "(" + std::to_string(p.worker) + "," + std::to_string(p.firm) + ")";
  }
  return out + "]";
}

std::string write_transcript(const Transcript& tr) {
  std::ostringstream out;
  out << "# smlab transcript\n";
  out << "learner=" << tr.learner << " policy=" << tr.policy << " learner_seed=" << tr.learner_seed
      << " environment_seed=" << tr.environment_seed << " rng=" << Rng::kAlgorithm << " workers=" << tr.n_workers
      << " firms=" << tr.n_firms << " max_rounds=" << tr.max_rounds << '\n';
  for (const auto& r : tr.rounds) {
    out << "t=" << r.t << " propose=" << format_matching(r.proposal) << " response=" << format_response(r.response)
        << '\n';
  }
  out << "outcome=" << to_string(tr.outcome) << " queries=" << tr.queries() << " restarts=" << tr.restarts;
  if (tr.error) out << " error=" << to_string(*tr.error);
  out << '\n';
  if (!tr.message.empty()) out << "# " << tr.message << '\n';
  return out.str();
}

namespace {

[[noreturn]] void bad_line(int line_no, const std::string& why) {
  fail(ErrorCode::ParseError, "transcript line " + std::to_string(line_no) + ": " + why);
}

std::uint64_t to_u64(const std::string& v, int line_no) {
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != v.size()) bad_line(line_no, "bad number '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    bad_line(line_no, "bad number '" + v + "'");
  }
}

std::vector<std::pair<std::string, std::string>> key_values(const std::string& line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (!out.empty()) out.back().second += " " + tok;
      continue;
    }
    out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return out;
}

Matching parse_matching(const std::string& text, int line_no) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') bad_line(line_no, "bad matching");
  std::vector<Pair> pairs;
  std::size_t i = 1;
  while (i + 1 < text.size()) {
    if (text[i] == ',') {
      ++i;
      continue;
    }
    const auto close = text.find(')', i);
    if (text[i] != '(' || close == std::string::npos) bad_line(line_no, "bad pair");
    const std::string inner = text.substr(i + 1, close - i - 1);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) bad_line(line_no, "bad pair");
    pairs.push_back({static_cast<int>(to_u64(inner.substr(0, comma), line_no)),
                     static_cast<int>(to_u64(inner.substr(comma + 1), line_no))});
    i = close + 1;
  }
  return Matching(std::move(pairs));
}

QueryResponse parse_response(const std::string& text, int line_no) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  if (kind == "stable") return Stable{};
  std::string a;
  std::string b;
  if (!(in >> a >> b)) bad_line(line_no, "bad response");
  if (kind == "block") return Blocking{{static_cast<int>(to_u64(a, line_no)), static_cast<int>(to_u64(b, line_no))}};
  if (kind == "iblock" && (a == "W" || a == "F")) {
    return IndividuallyBlocking{{a == "W" ? Side::Worker : Side::Firm, static_cast<int>(to_u64(b, line_no))}};
  }
  bad_line(line_no, "bad response");
}

}  // namespace

Transcript parse_transcript(std::string_view text) {
  Transcript tr;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto kv = key_values(line);
    if (kv.empty()) bad_line(line_no, "expected key=value fields");
    if (!header) {
      if (kv[0].first != "learner") bad_line(line_no, "expected the header line first");
      for (const auto& [k, v] : kv) {
        if (k == "learner") tr.learner = v;
        else if (k == "policy") tr.policy = v;
        else if (k == "learner_seed") tr.learner_seed = to_u64(v, line_no);
        else if (k == "environment_seed") tr.environment_seed = to_u64(v, line_no);
        else if (k == "workers") tr.n_workers = static_cast<int>(to_u64(v, line_no));
        else if (k == "firms") tr.n_firms = static_cast<int>(to_u64(v, line_no));
        else if (k == "max_rounds") tr.max_rounds = to_u64(v, line_no);
      }
      header = true;
      continue;
    }
    if (kv[0].first == "t") {
      if (kv.size() != 3 || kv[1].first != "propose" || kv[2].first != "response") bad_line(line_no, "bad round");
      tr.rounds.push_back({static_cast<int>(to_u64(kv[0].second, line_no)), parse_matching(kv[1].second, line_no),
                           parse_response(kv[2].second, line_no)});
    } else if (kv[0].first == "outcome") {
      const std::string& o = kv[0].second;
      tr.outcome = o == "stable" ? Outcome::Stable : o == "max_rounds" ? Outcome::MaxRounds : Outcome::Error;
      for (const auto& [k, v] : kv) {
        if (k == "restarts") tr.restarts = static_cast<int>(to_u64(v, line_no));
      }
    } else {
      bad_line(line_no, "unexpected record '" + kv[0].first + "'");
    }
  }
  if (!header) fail(ErrorCode::ParseError, "transcript has no header");
  return tr;
}

}  // namespace smlab
