#include "smlab/sat_reduction.hpp"

#include <bit>
#include <cstdlib>
#include <sstream>

#include "smlab/error.hpp"

namespace smlab {

namespace {

void validate(const Cnf& cnf) {
  if (cnf.num_vars < 0) fail(ErrorCode::MalformedClause, "negative variable count");
  for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
    const auto& clause = cnf.clauses[j];
    if (clause.empty() || clause.size() > 3) {
      fail(ErrorCode::MalformedClause, "clause " + std::to_string(j) + " has " + std::to_string(clause.size()) +
                                           " literals; expected 1 to 3");
    }
    for (int lit : clause) {
      if (lit == 0 || std::abs(lit) > cnf.num_vars) {
        fail(ErrorCode::MalformedClause, "clause " + std::to_string(j) + " names unknown literal " + std::to_string(lit));
      }
    }
  }
}

Mask mask_of(const std::vector<int>& set) {
  Mask m = 0;
  for (int s : set) m |= bit(s);
  return m;
}

}  // namespace

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  bool header = false;
  std::size_t expected = 0;
  std::vector<int> current;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first) || first[0] == 'c' || first[0] == '%') continue;
    if (first == "p") {
      std::string kind;
      long long vars = -1;
      long long clauses = -1;
      if (header || !(tokens >> kind >> vars >> clauses) || kind != "cnf" || vars < 0 || clauses < 0) {
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad problem line");
      }
      header = true;
      cnf.num_vars = static_cast<int>(vars);
      expected = static_cast<std::size_t>(clauses);
      continue;
    }
    if (!header) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": clause before problem line");
    std::istringstream all(line);
    std::string tok;
    while (all >> tok) {
      char* end = nullptr;
      const long v = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') {
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      }
      if (v == 0) {
        cnf.clauses.push_back(current);
        current.clear();
      } else {
        current.push_back(static_cast<int>(v));
      }
    }
  }
  if (!current.empty()) cnf.clauses.push_back(current);
  if (!header) fail(ErrorCode::ParseError, "missing problem line");
  if (cnf.clauses.size() != expected) {
    fail(ErrorCode::ParseError, "expected " + std::to_string(expected) + " clauses, found " +
                                    std::to_string(cnf.clauses.size()));
  }
  validate(cnf);
  return cnf;
}

std::string write_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

MixedInstance reduce_3sat(const Cnf& cnf) {
  validate(cnf);
  MixedInstance inst;
  inst.n = 2 * cnf.num_vars + 1;
  const int pivot = pivot_element(cnf.num_vars);
  for (int i = 1; i <= cnf.num_vars; ++i) {
    inst.follow.push_back(make_constraint(pivot, {positive_literal_element(i), negative_literal_element(i)}));
  }
  for (const auto& clause : cnf.clauses) {
    std::vector<int> set;
    for (int lit : clause) set.push_back(lit > 0 ? positive_literal_element(lit) : negative_literal_element(-lit));
    inst.precede.push_back(make_constraint(pivot, std::move(set)));
  }
  return inst;
}

bool satisfies_mixed(std::span<const int> order, const MixedInstance& instance) {
  const auto pos = positions(order);
  for (const auto& c : instance.precede) {
    if (!satisfies(pos, c)) return false;
  }
  for (const auto& c : instance.follow) {
    const int px = pos[static_cast<std::size_t>(c.subject)];
    bool ok = false;
    for (int s : c.set) ok = ok || pos[static_cast<std::size_t>(s)] < px;
    if (!ok) return false;
  }
  return true;
}

bool decide_mixed_consistent(const MixedInstance& instance, int cap) {
  const int n = instance.n;
  if (n > std::min(cap, kHardEnumerationLimit)) {
    fail(ErrorCode::TooLarge, "mixed instance on " + std::to_string(n) + " elements exceeds cap " + std::to_string(cap));
  }
  std::vector<std::vector<Mask>> ahead(static_cast<std::size_t>(n));
  std::vector<std::vector<Mask>> behind(static_cast<std::size_t>(n));
  for (const auto& c : instance.precede) ahead[static_cast<std::size_t>(c.subject)].push_back(mask_of(c.set));
  for (const auto& c : instance.follow) behind[static_cast<std::size_t>(c.subject)].push_back(mask_of(c.set));

  // x may follow prefix p iff no precede-set is already exhausted and every
  // follow-set is already touched.
  auto allowed = [&](int x, Mask p) {
    for (Mask m : ahead[static_cast<std::size_t>(x)]) {
      if ((m & p) == m) return false;
    }
    for (Mask m : behind[static_cast<std::size_t>(x)]) {
      if ((m & p) == 0) return false;
    }
    return true;
  };

  const Mask full = full_mask(n);
  std::vector<char> reachable(static_cast<std::size_t>(full) + 1, 0);
  reachable[0] = 1;
  for (Mask p = 0; p < full; ++p) {
    if (!reachable[static_cast<std::size_t>(p)]) continue;
    for (Mask m = full & ~p; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      if (allowed(x, p)) reachable[static_cast<std::size_t>(p | bit(x))] = 1;
    }
  }
  return reachable[static_cast<std::size_t>(full)] != 0;
}

bool satisfiable_by_truth_table(const Cnf& cnf) {
  validate(cnf);
  if (cnf.num_vars > 30) fail(ErrorCode::TooLarge, "truth table over more than 30 variables");
  const std::uint64_t rows = std::uint64_t{1} << cnf.num_vars;
  for (std::uint64_t assignment = 0; assignment < rows; ++assignment) {
    bool all = true;
    for (const auto& clause : cnf.clauses) {
      bool any = false;
      for (int lit : clause) {
        const bool value = (assignment >> (std::abs(lit) - 1)) & 1U;
        any = any || (lit > 0 ? value : !value);
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace smlab
