#ifndef CFRK_ASSIGNMENT_HPP
#define CFRK_ASSIGNMENT_HPP

#include <optional>
#include <vector>

#include "cfrk/instance.hpp"

namespace cfrk {

// Weighted clients to capacitated sinks with per-pair unit costs taken from
// the metric (squared for means). Supplies may be rational; they are scaled
// to a common integer denominator before flow solving.
struct TransportationProblem {
  const MetricSpace* metric = nullptr;
  Objective objective = Objective::median;
  std::vector<int> clients;
  std::vector<Rational> supplies;       // per client, nonnegative
  std::vector<int> centers;
  std::vector<long long> capacities;    // per center, in weight units
};

// Minimum-cost capacity-respecting assignment via successive shortest paths
// with potentials. Returns nullopt when total capacity cannot cover total
// supply. Unit supplies and integer capacities yield an integral assignment.
std::optional<Solution> solve_transportation(const TransportationProblem& tp);

// Optimal assignment of the instance's clients to a fixed center set. The
// center set is taken as given; fair-range checking is the caller's concern.
std::optional<Solution> optimal_assignment(const Instance& inst,
                                           const std::vector<int>& centers);

// Denominator cap applied when rational weights are scaled to integers.
inline constexpr long long kWeightScaleCap = 1'000'000;

}  // namespace cfrk

#endif  // CFRK_ASSIGNMENT_HPP
