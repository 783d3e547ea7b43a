#ifndef CFRK_TESTS_HELPERS_HPP
#define CFRK_TESTS_HELPERS_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfrk/assignment.hpp"
#include "cfrk/instance.hpp"
#include "cfrk/oracle.hpp"

namespace cfrk::testing {

inline std::vector<std::string> names_n(int n, const std::string& prefix = "p") {
  std::vector<std::string> out(n);
  for (int i = 0; i < n; ++i) out[i] = prefix + std::to_string(i);
  return out;
}

inline std::shared_ptr<const MetricSpace> matrix_metric(
    std::vector<std::vector<long long>> d) {
  const int n = static_cast<int>(d.size());
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = Rational(d[i][j]);
  return std::make_shared<MetricSpace>(
      MetricSpace::from_matrix(names_n(n), std::move(rows)));
}

// Clients first (indices 0..nc-1), then facilities, all pairwise distances
// from the matrix. Unit capacities unless given.
inline Instance simple_instance(int k, int nc, int nf,
                                std::vector<std::vector<long long>> d,
                                std::vector<long long> caps = {}) {
  Instance inst;
  inst.k = k;
  inst.metric = matrix_metric(std::move(d));
  for (int i = 0; i < nc; ++i) inst.clients.push_back(i);
  for (int i = 0; i < nf; ++i) {
    inst.facilities.push_back(nc + i);
    inst.capacity[nc + i] = caps.empty() ? nc : caps[i];
  }
  return inst;
}

// Exhaustive integral-assignment optimum; independent of the flow solver.
// Intended for clients^centers <= ~1e6.
inline std::optional<Rational> enumerate_assignment_cost(
    const Instance& inst, const std::vector<int>& centers) {
  const int nc = static_cast<int>(inst.clients.size());
  const int nf = static_cast<int>(centers.size());
  std::optional<Rational> best;
  std::vector<int> pick(nc, 0);
  for (;;) {
    std::vector<Rational> load(nf, Rational(0));
    Rational cost(0);
    bool ok = true;
    for (int i = 0; i < nc && ok; ++i) {
      load[pick[i]] += inst.weight_of(inst.clients[i]);
      cost += inst.weight_of(inst.clients[i]) *
              inst.cost_term(inst.clients[i], centers[pick[i]]);
    }
    for (int j = 0; j < nf && ok; ++j)
      if (load[j] > Rational(inst.capacity_of(centers[j]))) ok = false;
    if (ok && (!best || cost < *best)) best = cost;
    int i = 0;
    while (i < nc && ++pick[i] == nf) pick[i++] = 0;
    if (i == nc) break;
  }
  return best;
}

// Exhaustive fair-range + assignment optimum over all k-subsets; independent
// of oracle.cpp's pruning search.
inline std::optional<Rational> tiny_exhaustive_opt(const Instance& inst) {
  const int nf = static_cast<int>(inst.facilities.size());
  std::optional<Rational> best;
  for (unsigned mask = 0; mask < (1u << nf); ++mask) {
    if (__builtin_popcount(mask) != inst.k) continue;
    std::vector<int> centers;
    for (int i = 0; i < nf; ++i)
      if (mask & (1u << i)) centers.push_back(inst.facilities[i]);
    bool fair = true;
    for (size_t g = 0; g < inst.groups.size() && fair; ++g) {
      long long cnt = 0;
      for (int f : inst.groups[g])
        cnt += std::count(centers.begin(), centers.end(), f);
      if (cnt < inst.lower[g] || cnt > inst.upper[g]) fair = false;
    }
    if (!fair) continue;
    auto cost = enumerate_assignment_cost(inst, centers);
    if (cost && (!best || *cost < *best)) best = *cost;
  }
  return best;
}

}  // namespace cfrk::testing

#endif
