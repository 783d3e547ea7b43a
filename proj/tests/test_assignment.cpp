#include <doctest.h>

#include <random>

#include "cfrk/assignment.hpp"
#include "cfrk/generators.hpp"
#include "helpers.hpp"

using namespace cfrk;
using testing::enumerate_assignment_cost;
using testing::simple_instance;

TEST_CASE("optimal_assignment: forced single-center assignment") {
  Instance inst = simple_instance(1, 2, 1, {{0, 9, 1}, {9, 0, 3}, {1, 3, 0}}, {2});
  auto sol = optimal_assignment(inst, {2});
  REQUIRE(sol.has_value());
  CHECK(sol->cost == Rational(4));
  CHECK(sol->is_integral(inst));
}

TEST_CASE("optimal_assignment: zero-cost perfect matching") {
  // clients 0,1 co-located with facilities 2,3; cross distance 5
  Instance inst = simple_instance(2, 2, 2,
                                  {{0, 5, 0, 5},
                                   {5, 0, 5, 0},
                                   {0, 5, 0, 5},
                                   {5, 0, 5, 0}},
                                  {1, 1});
  auto sol = optimal_assignment(inst, {2, 3});
  REQUIRE(sol.has_value());
  CHECK(sol->cost == Rational(0));
}

TEST_CASE("optimal_assignment: infeasible when capacity cannot cover weight") {
  Instance inst = simple_instance(1, 3, 1,
                                  {{0, 1, 1, 1},
                                   {1, 0, 1, 1},
                                   {1, 1, 0, 1},
                                   {1, 1, 1, 0}},
                                  {2});
  CHECK(!optimal_assignment(inst, {3}).has_value());
}

TEST_CASE("optimal_assignment matches exhaustive enumeration") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 30; ++it) {
    const int nc = static_cast<int>(rand_range(rng, 1, 5));
    const int nf = 2;
    const int n = nc + nf;
    std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rand_range(rng, 0, 30);
    Instance inst = simple_instance(nf, nc, nf, d, {3, 2});
    std::vector<int> centers = inst.facilities;
    auto expected = enumerate_assignment_cost(inst, centers);
    auto sol = optimal_assignment(inst, centers);
    REQUIRE(expected.has_value() == sol.has_value());
    if (sol) CHECK(sol->cost == *expected);
  }
}

TEST_CASE("optimal_assignment never loses to a random feasible assignment") {
  std::mt19937_64 rng(43);
  const int nc = 6, nf = 3, n = nc + nf;
  std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rand_range(rng, 1, 50);
  Instance inst = simple_instance(nf, nc, nf, d, {3, 2, 2});
  auto sol = optimal_assignment(inst, inst.facilities);
  REQUIRE(sol.has_value());
  int produced = 0;
  while (produced < 100) {
    std::vector<int> pick(nc);
    std::vector<long long> load(nf, 0);
    bool ok = true;
    for (int c = 0; c < nc; ++c) {
      pick[c] = static_cast<int>(rand_range(rng, 0, nf - 1));
      if (++load[pick[c]] > inst.capacity_of(inst.facilities[pick[c]])) ok = false;
    }
    if (!ok) continue;
    ++produced;
    Rational cost(0);
    for (int c = 0; c < nc; ++c) cost += Rational(d[c][nc + pick[c]]);
    CHECK(sol->cost <= cost);
  }
}

TEST_CASE("uncapacitated collapse: huge capacities give nearest-center costs") {
  std::mt19937_64 rng(47);
  for (int it = 0; it < 10; ++it) {
    const int nc = 5, nf = 3, n = nc + nf;
    std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rand_range(rng, 1, 50);
    Instance inst = simple_instance(nf, nc, nf, d,
                                    {nc + 5, nc + 5, nc + 5});
    auto sol = optimal_assignment(inst, inst.facilities);
    REQUIRE(sol.has_value());
    Rational nearest(0);
    for (int c = 0; c < nc; ++c) {
      long long best = d[c][nc];
      for (int f = 1; f < nf; ++f) best = std::min(best, d[c][nc + f]);
      nearest += Rational(best);
    }
    CHECK(sol->cost == nearest);
  }
}

TEST_CASE("unit weights and integer capacities give integral assignments") {
  std::mt19937_64 rng(53);
  for (int it = 0; it < 20; ++it) {
    const int nc = static_cast<int>(rand_range(rng, 2, 6));
    const int nf = static_cast<int>(rand_range(rng, 2, 3));
    const int n = nc + nf;
    std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rand_range(rng, 0, 9);
    std::vector<long long> caps;
    long long total = 0;
    for (int f = 0; f < nf; ++f) {
      caps.push_back(rand_range(rng, 1, 4));
      total += caps.back();
    }
    if (total < nc) continue;
    Instance inst = simple_instance(nf, nc, nf, d, caps);
    auto sol = optimal_assignment(inst, inst.facilities);
    REQUIRE(sol.has_value());
    CHECK(sol->is_integral(inst));
    for (const auto& a : sol->assignment)
      CHECK((a.amount == Rational(0) || a.amount == Rational(1)));
  }
}

TEST_CASE("rational weights are scaled to a common denominator") {
  Instance inst = simple_instance(1, 2, 1, {{0, 9, 2}, {9, 0, 3}, {2, 3, 0}}, {4});
  inst.client_weight[0] = Rational(3, 2);
  inst.client_weight[1] = Rational(5, 4);
  auto sol = optimal_assignment(inst, {2});
  REQUIRE(sol.has_value());
  CHECK(sol->weight_scale == 4);
  CHECK(!sol->weights_rounded);
  CHECK(sol->cost == Rational(3, 2) * Rational(2) + Rational(5, 4) * Rational(3));
}
