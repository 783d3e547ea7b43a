#ifndef CFRK_POLY_PIPELINE_HPP
#define CFRK_POLY_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cfrk/instance.hpp"

namespace cfrk {

struct PolyApproxOptions {
  int swap_size = 1;       // baseline local-search swap size p
  int trials = 32;         // independent tree-embedding seeds
  std::uint64_t seed = 0;  // master seed; per-trial seeds derive from it
  // Skip the clique-star step and embed all points directly (comparison
  // mode; the direct embedding only gives a log n stretch).
  bool embed_all = false;
};

struct PolyApproxTrial {
  std::uint64_t seed = 0;
  Rational tree_cost;   // exact optimum on the embedded tree
  Rational true_cost;   // opened set re-assigned under the original metric
  bool feasible = false;
};

struct PolyApproxResult {
  std::optional<Solution> solution;  // best trial, original-metric assignment
  std::vector<int> baseline;
  int best_trial = -1;
  std::vector<PolyApproxTrial> trials;
};

// Baseline local search -> clique-star metric -> random tree embedding ->
// exact tree solve, repeated over independent seeds; keeps the cheapest
// opened set re-evaluated under the original metric and objective.
PolyApproxResult poly_approx_solve(const Instance& inst,
                                   const PolyApproxOptions& opts = {});

}  // namespace cfrk

#endif  // CFRK_POLY_PIPELINE_HPP
