#ifndef CFRK_CNF_HPP
#define CFRK_CNF_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace cfrk {

// Propositional CNF with clauses of one to three literals. Literal v > 0
// means variable v, literal -v its negation; variables are 1-based.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::string source;

  int clause_count() const { return static_cast<int>(clauses.size()); }
};

struct CnfParseError : std::runtime_error {
  int line;
  CnfParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

// DIMACS CNF. Comments ignored; clause count must match the header.
CnfFormula parse_cnf(const std::string& text);

// Canonical DIMACS form: header, one clause per line, no comments.
std::string serialize_cnf(const CnfFormula& cnf);

// True when the assignment (bit i-1 = variable i) satisfies the clause.
bool clause_satisfied(const std::vector<int>& clause, unsigned long long assignment);

// Maximum number of simultaneously satisfiable clauses, by exhaustive
// enumeration over all 2^num_vars assignments. Intended for num_vars <= 20.
int max_satisfiable_clauses(const CnfFormula& cnf);

}  // namespace cfrk

#endif  // CFRK_CNF_HPP
