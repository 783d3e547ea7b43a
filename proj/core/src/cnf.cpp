#include "cfrk/cnf.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace cfrk {

CnfFormula parse_cnf(const std::string& text) {
  CnfFormula cnf;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  int declared_clauses = 0;
  std::vector<int> pending;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "p") {
      std::string fmt;
      if (header_seen) throw CnfParseError(line_no, "duplicate header");
      if (!(ls >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf")
        throw CnfParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      if (cnf.num_vars < 0 || declared_clauses < 0)
        throw CnfParseError(line_no, "negative counts in header");
      header_seen = true;
      continue;
    }
    if (!header_seen) throw CnfParseError(line_no, "clause before header");
    // Clause tokens; 0 terminates a clause (clauses may span lines).
    ls.clear();
    ls.str(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (pending.empty()) throw CnfParseError(line_no, "empty clause");
        if (pending.size() > 3)
          throw CnfParseError(line_no, "clause has more than three literals");
        cnf.clauses.push_back(pending);
        pending.clear();
      } else {
        int v = std::abs(lit);
        if (v > cnf.num_vars)
          throw CnfParseError(line_no, "literal references variable " +
                                           std::to_string(v) + " > declared " +
                                           std::to_string(cnf.num_vars));
        pending.push_back(lit);
      }
    }
    if (ls.fail() && !ls.eof()) throw CnfParseError(line_no, "malformed literal");
  }
  if (!header_seen) throw CnfParseError(line_no, "missing header");
  if (!pending.empty()) throw CnfParseError(line_no, "unterminated clause");
  if (cnf.clause_count() != declared_clauses)
    throw CnfParseError(line_no, "clause count " + std::to_string(cnf.clause_count()) +
                                     " does not match header " +
                                     std::to_string(declared_clauses));
  return cnf;
}

std::string serialize_cnf(const CnfFormula& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << " " << cnf.clause_count() << "\n";
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << " ";
    out << "0\n";
  }
  return out.str();
}

bool clause_satisfied(const std::vector<int>& clause, unsigned long long assignment) {
  for (int lit : clause) {
    int v = std::abs(lit) - 1;
    bool val = (assignment >> v) & 1ULL;
    if ((lit > 0) == val) return true;
  }
  return false;
}

int max_satisfiable_clauses(const CnfFormula& cnf) {
  int best = 0;
  for (unsigned long long a = 0; a < (1ULL << cnf.num_vars); ++a) {
    int sat = 0;
    for (const auto& clause : cnf.clauses) sat += clause_satisfied(clause, a);
    best = std::max(best, sat);
    if (best == cnf.clause_count()) break;
  }
  return best;
}

}  // namespace cfrk
