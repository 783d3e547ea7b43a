#ifndef CFRK_INSTANCE_HPP
#define CFRK_INSTANCE_HPP

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfrk/metric_space.hpp"
#include "cfrk/rational.hpp"

namespace cfrk {

enum class Objective { median, means };

std::string objective_name(Objective o);
std::optional<Objective> objective_from_name(std::string_view s);

// Capacitated fair-range k-clustering instance. Points are indices into the
// metric space (which may carry extra auxiliary nodes). A point may be both a
// client and a facility; the roles are tracked separately. Immutable by
// convention once built; every solver takes it by const reference.
struct Instance {
  int k = 1;
  Objective objective = Objective::median;
  std::shared_ptr<const MetricSpace> metric;
  std::vector<int> clients;
  std::vector<int> facilities;
  std::vector<std::vector<int>> groups;           // facility point indices
  std::vector<long long> lower;                   // alpha, one per group
  std::vector<long long> upper;                   // beta, one per group
  std::unordered_map<int, long long> capacity;    // facility -> served-weight cap
  std::unordered_map<int, Rational> client_weight;  // default 1

  int group_count() const { return static_cast<int>(groups.size()); }
  Rational weight_of(int client) const;
  Rational total_client_weight() const;
  // Facilities without an explicit capacity default to ceil(total weight),
  // which never binds.
  long long capacity_of(int facility) const;

  const Rational& dist(int u, int v) const { return metric->dist(u, v); }
  // Distance term under the instance objective (squared for means).
  Rational cost_term(int client, int facility) const;

  Instance with_metric(std::shared_ptr<const MetricSpace> m) const;
};

// One serving relation; integral assignments have amount == weight_of(client).
struct ServedAmount {
  int client = 0;
  int center = 0;
  Rational amount;
};

struct Solution {
  std::vector<int> centers;  // sorted, unique point indices
  std::vector<ServedAmount> assignment;
  Rational cost;
  // Rational client weights are scaled to integers before flow solving; a
  // scale > 1 with rounding means the assignment is exact for the scaled
  // weights, not the original ones.
  long long weight_scale = 1;
  bool weights_rounded = false;

  bool is_integral(const Instance& inst) const;
};

struct FeasibilityReport {
  std::vector<bool> fair_range_ok;       // per group
  std::vector<long long> group_counts;   // |S ∩ G_i|
  bool capacity_ok = false;   // sum of selected capacities covers total weight
  bool assignment_ok = false; // a capacity-respecting assignment exists

  bool fair_range_all_ok() const;
  bool ok() const { return fair_range_all_ok() && capacity_ok && assignment_ok; }
};

// Empty iff every type invariant holds and the metric covers all points.
// Violations are data, not faults; each names the field and rule.
std::vector<std::string> validate_instance(const Instance& inst);

FeasibilityReport check_feasibility(const Instance& inst,
                                    const std::vector<int>& centers);

// Weighted cost of a solution under the instance objective. Throws
// std::invalid_argument when the assignment references a non-selected center
// or leaves a client partially served.
Rational evaluate_cost(const Instance& inst, const Solution& sol);

// Best-effort fair-range center search: repeatedly pick the facility that
// advances the most unmet lower bounds without breaching an upper bound, then
// pad to k with harmless facilities. Absence does NOT prove infeasibility.
std::optional<std::vector<int>> greedy_feasible(const Instance& inst);

}  // namespace cfrk

#endif  // CFRK_INSTANCE_HPP
