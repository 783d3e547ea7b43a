#ifndef CFRK_GENERATORS_HPP
#define CFRK_GENERATORS_HPP

#include <cstdint>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfrk/cnf.hpp"
#include "cfrk/instance.hpp"

namespace cfrk {

// Deterministic helpers; std::uniform_int_distribution is not pinned across
// standard libraries, these are.
long long rand_range(std::mt19937_64& rng, long long lo, long long hi);

struct RandomInstanceParams {
  int n = 10;            // total points
  int k = 2;
  int t = 2;             // groups
  long long cap_min = 1;
  long long cap_max = 4;
  MetricKind metric_kind = MetricKind::dense;  // dense (L1 grid points) or tree
  long long coord_range = 50;   // grid size for dense instances
  long long edge_max = 10;      // tree edge weights in [1, edge_max]
  Objective objective = Objective::median;
  int rejection_cap = 200;
};

// Reproducible random instance. Group bounds are drawn around a planted
// feasible center set, so greedy_feasible succeeds on at least half the
// draws; throws std::runtime_error when the rejection cap is exhausted.
Instance gen_random_instance(const RandomInstanceParams& params, std::uint64_t seed);

enum class BoundsMode { range, lower_only };
enum class ReductionCapacities { unit, unbounded };
enum class ReductionMode { per_clause, super_clause };

struct FacilityProvenance {
  int gadget = 0;  // clause or super-clause index
  std::vector<std::pair<int, bool>> partial;  // (variable, value)
};

struct ReductionArtifact {
  Instance instance;
  ReductionMode mode = ReductionMode::per_clause;
  BoundsMode bounds = BoundsMode::range;
  ReductionCapacities capacities = ReductionCapacities::unit;
  long long d_param = 100;
  int kappa = 0;
  std::unordered_map<int, FacilityProvenance> provenance;  // facility point -> origin
  std::vector<int> padded_clauses;  // indices that were literal-padded
  std::vector<int> clients;         // client point per gadget, gadget order
  int dummy_node = -1;              // the hub node s
};

// Per-clause 3SAT reduction: one client and one facility per partial
// assignment of each clause's variables, clause groups with bounds (1,1),
// assignment groups enforcing consistency across clause pairs, k = m.
// Client-facility edges weigh 1 when the partial assignment satisfies the
// clause and D otherwise; the hub s hangs off every client at weight 1.
ReductionArtifact gen_sat_reduction(const CnfFormula& cnf, long long D,
                                    BoundsMode bounds = BoundsMode::range,
                                    ReductionCapacities caps = ReductionCapacities::unit);

// Super-clause variant: clauses split into kappa blocks, one client per
// block, a facility per partial assignment to the block's variables.
// Refuses (std::invalid_argument) when a block accumulates more than
// var_cap variables. kappa must divide the padded clause count.
ReductionArtifact gen_gap_sat_reduction(const CnfFormula& cnf, int kappa,
                                        long long D,
                                        BoundsMode bounds = BoundsMode::range,
                                        ReductionCapacities caps = ReductionCapacities::unit,
                                        int var_cap = 20);

}  // namespace cfrk

#endif  // CFRK_GENERATORS_HPP
