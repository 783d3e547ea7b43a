#ifndef CFRK_ORACLE_HPP
#define CFRK_ORACLE_HPP

#include <optional>
#include <stdexcept>

#include "cfrk/instance.hpp"

namespace cfrk {

// Raised instead of returning a silent approximation when the subset
// enumeration would exceed the configured work cap.
struct WorkCapExceeded : std::runtime_error {
  explicit WorkCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct OracleOptions {
  // When set, also consider center sets smaller than k.
  bool at_most_k = false;
  // Upper bound on enumeration nodes visited before refusing.
  long long work_cap = 200'000'000;
};

// Ground truth: enumerates k-subsets of the facilities with fair-range
// pruning, runs the optimal assignment on survivors and keeps the exact
// minimum. Ties break toward the lexicographically smallest center set.
std::optional<Solution> brute_force_solve(const Instance& inst,
                                          const OracleOptions& opts = {});

}  // namespace cfrk

#endif  // CFRK_ORACLE_HPP
