#ifndef CFRK_EMBEDDINGS_HPP
#define CFRK_EMBEDDINGS_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "cfrk/instance.hpp"

namespace cfrk {

// Fairness- and capacity-agnostic k-median baseline: p-swap local search over
// k-subsets of the facilities, exact-rational improvement test, deterministic
// start and sweep order. eta = 3 + 2/p for exact local optima.
std::vector<int> kmedian_baseline(const Instance& inst, int swap_size = 1);

// Uncapacitated nearest-center k-median cost of a center set (plain
// distances, client weights applied).
Rational kmedian_cost(const Instance& inst, const std::vector<int>& centers);

// Metric rebuilt from a hub clique plus one pendant edge per remaining node.
struct CliqueStarMetric {
  std::vector<int> hubs;              // sorted metric node ids
  std::vector<int> hub_of;            // node -> its hub (hubs map to themselves)
  std::vector<Rational> pendant_len;  // node -> d(node, hub_of[node])
  std::shared_ptr<const MetricSpace> derived;  // dense d' over the same nodes
};

// Hubs = baseline set; every client hangs off its assigned (nearest) hub,
// every other node off its nearest hub; hub pairs keep original distances.
// The returned instance differs from the input only in its metric, and d'
// dominates d pairwise.
std::pair<Instance, CliqueStarMetric> clique_star_embed(
    const Instance& inst, const std::vector<int>& baseline);

// Randomized hierarchical decomposition tree over a point subset. Leaf
// distances dominate the input metric exactly for every seed; expected
// stretch is logarithmic in the point count.
struct EmbeddedTree {
  std::shared_ptr<const MetricSpace> tree;  // tree metric; leaves come first
  std::vector<int> leaf_of_point;           // input point order -> tree node
  std::uint64_t seed = 0;
};

EmbeddedTree frt_tree_embed(const std::vector<int>& points,
                            const MetricSpace& dists, std::uint64_t seed);

// Replaces the hub clique of a clique-star instance by one random
// decomposition tree and reattaches every pendant edge to its hub's leaf.
// d'' dominates d' pairwise for every seed; callers run several seeds and
// keep the best downstream result.
Instance clique_star_to_tree(const Instance& star_instance,
                             const CliqueStarMetric& csm, std::uint64_t seed);

}  // namespace cfrk

#endif  // CFRK_EMBEDDINGS_HPP
