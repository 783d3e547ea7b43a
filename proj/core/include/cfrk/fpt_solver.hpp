#ifndef CFRK_FPT_SOLVER_HPP
#define CFRK_FPT_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cfrk/instance.hpp"

namespace cfrk {

// Group-membership signature of a facility, bit g set when it belongs to
// group g. Requires t <= 30.
using CharVec = std::uint32_t;

struct CharacteristicPartition {
  int t = 0;
  // Nonempty cells sorted by key; members sorted. Cells partition F.
  std::vector<std::pair<CharVec, std::vector<int>>> cells;
};

CharacteristicPartition characteristic_partition(const Instance& inst);

// k-multiset of cell signatures. Feasible when the element-wise sum lies in
// [alpha, beta] and no cell is used more often than it has members.
struct ConstraintPattern {
  std::vector<CharVec> cells;  // sorted, size k
  bool feasible = true;
};

std::vector<ConstraintPattern> enumerate_feasible_patterns(
    const CharacteristicPartition& partition, int k,
    const std::vector<long long>& alpha, const std::vector<long long>& beta);

enum class CoresetMode { identity, sample };

struct Coreset {
  std::vector<int> clients;
  std::vector<Rational> weights;
  CoresetMode mode = CoresetMode::identity;
  double eps1 = 0.0;
};

// identity: W = C with unit weights (exact). sample: uniform subset of the
// usual k^2 eps^-3 log^2 n size with weights |C|/|W| -- a heuristic without
// a worst-case guarantee; falls back to identity when the target reaches n.
Coreset build_coreset(const Instance& inst, double eps1, CoresetMode mode,
                      std::uint64_t seed = 0);

// One-per-group instance: k disjoint groups obtained by aliasing cell
// copies; aliases are co-located with their originals and share capacities.
struct OpgGroup {
  CharVec cell = 0;
  int copy_index = 0;              // 0 = originals, >0 = alias copies
  std::vector<int> originals;      // member original point ids
  std::vector<long long> alias_ids;  // parallel to originals
};

struct OpgInstance {
  int k = 0;
  Objective objective = Objective::median;
  std::shared_ptr<const MetricSpace> metric;
  std::vector<int> coreset_clients;
  std::vector<Rational> coreset_weights;
  std::vector<OpgGroup> groups;
  std::unordered_map<int, long long> capacity;        // original -> capacity
  std::unordered_map<long long, int> duplicate_map;   // alias -> original
};

// Throws std::invalid_argument when the pattern demands more copies of a
// cell than the cell has members.
OpgInstance build_opg_instance(const Instance& inst,
                               const ConstraintPattern& pattern,
                               const Coreset& coreset);

struct FptStats {
  long long patterns = 0;
  long long guesses = 0;        // completed selections
  long long pruned = 0;         // abandoned selection prefixes
  long long evaluated = 0;      // assignment solves after set deduplication
};

// Leader-guessing search over one OPG instance: enumerate leader multisets
// from the coreset, candidate radii, and group-to-leader pairings; per
// position pick the largest-capacity in-radius facility whose original is
// unused. Median guarantee (3 + 2*eps3) against the OPG optimum; means picks
// up the square.
std::optional<Solution> leader_guess_solve(const OpgInstance& opg, double eps3,
                                           FptStats* stats = nullptr);

// Full pipeline: characteristic partition, feasible patterns, one OPG
// instance per pattern, leader guessing, best mapped-back solution.
// eps3 = eps/2 for median and eps/16 for means so the end bound is
// (3+eps) / (9+eps).
std::optional<Solution> fpt_solve(
    const Instance& inst, double eps, FptStats* stats = nullptr,
    const std::function<void(const std::string&)>& progress = {},
    CoresetMode coreset_mode = CoresetMode::identity, double eps1 = 0.0,
    std::uint64_t seed = 0);

}  // namespace cfrk

#endif  // CFRK_FPT_SOLVER_HPP
