#include <doctest.h>

#include <random>

#include "cfrk/generators.hpp"
#include "cfrk/instance.hpp"
#include "helpers.hpp"

using namespace cfrk;
using testing::simple_instance;

namespace {

Instance three_clients_two_facilities() {
  // clients 0,1,2; facilities 3,4
  return simple_instance(1, 3, 2,
                         {{0, 4, 6, 1, 9},
                          {4, 0, 3, 2, 5},
                          {6, 3, 0, 7, 2},
                          {1, 2, 7, 0, 8},
                          {9, 5, 2, 8, 0}},
                         {3, 3});
}

}  // namespace

TEST_CASE("validate_instance: well-formed instance has no violations") {
  Instance inst = three_clients_two_facilities();
  inst.groups = {{3, 4}};
  inst.lower = {0};
  inst.upper = {1};
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("validate_instance: alpha above beta is reported") {
  Instance inst = three_clients_two_facilities();
  inst.groups = {{3}};
  inst.lower = {2};
  inst.upper = {1};
  auto v = validate_instance(inst);
  bool found = false;
  for (const auto& s : v)
    if (s.find("alpha[0] > beta[0]") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("validate_instance: group member that is not a facility") {
  Instance inst = three_clients_two_facilities();
  inst.groups = {{0}};  // a client id
  inst.lower = {0};
  inst.upper = {1};
  auto v = validate_instance(inst);
  bool found = false;
  for (const auto& s : v)
    if (s.find("member not a facility") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("check_feasibility: fair-range counting") {
  Instance inst = three_clients_two_facilities();
  inst.k = 1;
  inst.groups = {{3, 4}};
  inst.lower = {1};
  inst.upper = {1};
  auto rep = check_feasibility(inst, {3});
  CHECK(rep.fair_range_ok[0]);
  CHECK(rep.group_counts[0] == 1);
  auto rep2 = check_feasibility(inst, {3, 4});
  CHECK(!rep2.fair_range_ok[0]);
  CHECK(rep2.group_counts[0] == 2);
}

TEST_CASE("check_feasibility: capacity shortfall") {
  Instance inst = simple_instance(2, 3, 2,
                                  {{0, 1, 1, 1, 1},
                                   {1, 0, 1, 1, 1},
                                   {1, 1, 0, 1, 1},
                                   {1, 1, 1, 0, 1},
                                   {1, 1, 1, 1, 0}},
                                  {1, 1});
  auto rep = check_feasibility(inst, {3, 4});
  CHECK(!rep.capacity_ok);  // 2 < 3
  CHECK(!rep.assignment_ok);
}

TEST_CASE("evaluate_cost: median and means") {
  Instance inst = simple_instance(1, 1, 1, {{0, 2}, {2, 0}}, {1});
  Solution sol;
  sol.centers = {1};
  sol.assignment = {{0, 1, Rational(1)}};
  sol.cost = Rational(2);
  CHECK(evaluate_cost(inst, sol) == Rational(2));
  inst.objective = Objective::means;
  CHECK(evaluate_cost(inst, sol) == Rational(4));
}

TEST_CASE("evaluate_cost: rejects non-selected center") {
  Instance inst = simple_instance(1, 1, 2, {{0, 2, 3}, {2, 0, 1}, {3, 1, 0}},
                                  {1, 1});
  Solution sol;
  sol.centers = {1};
  sol.assignment = {{0, 2, Rational(1)}};
  CHECK_THROWS_AS(evaluate_cost(inst, sol), std::invalid_argument);
}

TEST_CASE("evaluate_cost agrees with an independent re-summation") {
  // 4 clients (0..3), 3 facilities (4..6), fixed integral assignment.
  std::vector<std::vector<long long>> d(7, std::vector<long long>(7, 0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) d[i][j] = d[j][i] = rand_range(rng, 1, 40);
  // enforce the triangle inequality by closing over the complete graph
  for (int m = 0; m < 7; ++m)
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  Instance inst = simple_instance(2, 4, 3, d, {2, 2, 2});
  std::vector<int> rho = {4, 5, 5, 6};
  Solution sol;
  sol.centers = {4, 5, 6};
  for (int c = 0; c < 4; ++c) sol.assignment.push_back({c, rho[c], Rational(1)});

  // independent oracle: hand-rolled loop over the distance matrix
  long long expected = 0;
  for (int c = 0; c < 4; ++c) expected += d[c][rho[c]];
  CHECK(evaluate_cost(inst, sol) == Rational(expected));

  inst.objective = Objective::means;
  long long expected_sq = 0;
  for (int c = 0; c < 4; ++c) expected_sq += d[c][rho[c]] * d[c][rho[c]];
  CHECK(evaluate_cost(inst, sol) == Rational(expected_sq));
}

TEST_CASE("means cost equals median cost on the squared matrix") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 10; ++it) {
    RandomInstanceParams params;
    params.n = 7;
    params.k = 2;
    params.t = 1;
    Instance inst = gen_random_instance(params, rng());
    Instance means = inst;
    means.objective = Objective::means;

    const int n = inst.metric->size();
    std::vector<std::vector<Rational>> sq(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sq[i][j] = inst.metric->dist(i, j) * inst.metric->dist(i, j);
    Instance squared = inst.with_metric(std::make_shared<MetricSpace>(
        MetricSpace::from_matrix(inst.metric->names(), std::move(sq))));

    Solution sol;
    sol.centers = {inst.facilities[0]};
    for (int c : inst.clients) sol.assignment.push_back({c, inst.facilities[0], inst.weight_of(c)});
    CHECK(evaluate_cost(means, sol) == evaluate_cost(squared, sol));
  }
}

TEST_CASE("greedy_feasible: disjoint singleton lower bounds force one per group") {
  Instance inst = simple_instance(3, 2, 3,
                                  {{0, 1, 1, 1, 1},
                                   {1, 0, 1, 1, 1},
                                   {1, 1, 0, 1, 1},
                                   {1, 1, 1, 0, 1},
                                   {1, 1, 1, 1, 0}},
                                  {2, 2, 2});
  inst.groups = {{2}, {3}, {4}};
  inst.lower = {1, 1, 1};
  inst.upper = {1, 1, 1};
  auto centers = greedy_feasible(inst);
  REQUIRE(centers.has_value());
  CHECK(*centers == std::vector<int>{2, 3, 4});
}

TEST_CASE("greedy_feasible: slack bounds still return exactly k") {
  Instance inst = simple_instance(2, 2, 4,
                                  {{0, 1, 1, 1, 1, 1},
                                   {1, 0, 1, 1, 1, 1},
                                   {1, 1, 0, 1, 1, 1},
                                   {1, 1, 1, 0, 1, 1},
                                   {1, 1, 1, 1, 0, 1},
                                   {1, 1, 1, 1, 1, 0}},
                                  {2, 2, 2, 2});
  inst.groups = {{2, 3, 4, 5}};
  inst.lower = {0};
  inst.upper = {2};
  auto centers = greedy_feasible(inst);
  REQUIRE(centers.has_value());
  CHECK(centers->size() == 2);
}

TEST_CASE("greedy_feasible on sat reductions passes the fair-range check") {
  CnfFormula cnf = parse_cnf("p cnf 3 3\n1 2 3 0\n-1 2 -3 0\n1 -2 3 0\n");
  ReductionArtifact art = gen_sat_reduction(cnf, 50);
  auto centers = greedy_feasible(art.instance);
  if (centers) {
    auto rep = check_feasibility(art.instance, *centers);
    CHECK(rep.fair_range_all_ok());
  }
}

TEST_CASE("raising beta never breaks a satisfied fair-range constraint") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 30; ++it) {
    RandomInstanceParams params;
    params.n = 8;
    params.k = 2;
    params.t = 2;
    Instance inst = gen_random_instance(params, rng());
    auto centers = greedy_feasible(inst);
    if (!centers) continue;
    auto before = check_feasibility(inst, *centers);
    Instance looser = inst;
    int g = static_cast<int>(rand_range(rng, 0, inst.group_count() - 1));
    looser.upper[g] += rand_range(rng, 1, 3);
    auto after = check_feasibility(looser, *centers);
    for (int i = 0; i < inst.group_count(); ++i)
      if (before.fair_range_ok[i]) CHECK(after.fair_range_ok[i]);
  }
}
