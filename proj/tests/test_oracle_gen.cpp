#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "cfrk/assignment.hpp"
#include "cfrk/cnf.hpp"
#include "cfrk/fpt_solver.hpp"
#include "cfrk/generators.hpp"
#include "cfrk/io.hpp"
#include "cfrk/oracle.hpp"
#include "helpers.hpp"

using namespace cfrk;

TEST_CASE("oracle: slack bounds with k = |F| select everything") {
  Instance inst = testing::simple_instance(2, 3, 2,
                                           {{0, 2, 3, 1, 4},
                                            {2, 0, 2, 2, 2},
                                            {3, 2, 0, 4, 1},
                                            {1, 2, 4, 0, 5},
                                            {4, 2, 1, 5, 0}},
                                           {2, 2});
  auto sol = brute_force_solve(inst);
  REQUIRE(sol.has_value());
  CHECK(sol->centers == std::vector<int>{3, 4});
  auto direct = optimal_assignment(inst, {3, 4});
  REQUIRE(direct.has_value());
  CHECK(sol->cost == direct->cost);
}

TEST_CASE("oracle: unsatisfiable fair range reports infeasible") {
  Instance inst = testing::simple_instance(1, 1, 2, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}},
                                           {1, 1});
  inst.groups = {{1}};
  inst.lower = {2};
  inst.upper = {2};
  CHECK(!brute_force_solve(inst).has_value());
}

TEST_CASE("oracle: agrees with an independent exhaustive search") {
  std::mt19937_64 rng(181);
  for (int it = 0; it < 25; ++it) {
    RandomInstanceParams params;
    params.n = 8;
    params.k = 2;
    params.t = 2;
    Instance inst = gen_random_instance(params, rng());
    auto expected = testing::tiny_exhaustive_opt(inst);
    auto sol = brute_force_solve(inst);
    REQUIRE(expected.has_value() == sol.has_value());
    if (sol) CHECK(sol->cost == *expected);
  }
}

TEST_CASE("oracle: work cap refusal is an explicit error") {
  RandomInstanceParams params;
  params.n = 14;
  params.k = 4;
  params.t = 1;
  Instance inst = gen_random_instance(params, 99);
  OracleOptions opts;
  opts.work_cap = 3;
  CHECK_THROWS_AS(brute_force_solve(inst, opts), WorkCapExceeded);
}

TEST_CASE("gen_random_instance: identical seeds give identical instances") {
  RandomInstanceParams params;
  params.n = 10;
  params.k = 2;
  params.t = 2;
  Instance a = gen_random_instance(params, 777);
  Instance b = gen_random_instance(params, 777);
  CHECK(serialize_instance(a) == serialize_instance(b));
  Instance c = gen_random_instance(params, 778);
  CHECK(serialize_instance(a) != serialize_instance(c));
}

TEST_CASE("gen_random_instance: t=0 gives a vanilla capacitated instance") {
  RandomInstanceParams params;
  params.n = 8;
  params.k = 2;
  params.t = 0;
  Instance inst = gen_random_instance(params, 5);
  CHECK(inst.group_count() == 0);
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("gen_random_instance: batch self-test at n=10") {
  std::mt19937_64 rng(191);
  int greedy_hits = 0;
  const int draws = 200;
  for (int it = 0; it < draws; ++it) {
    RandomInstanceParams params;
    params.n = 10;
    params.k = 2;
    params.t = 2;
    std::uint64_t seed = rng();
    MetricKind kind = it % 2 ? MetricKind::tree : MetricKind::dense;
    params.metric_kind = kind;
    Instance inst = gen_random_instance(params, seed);
    CHECK(validate_instance(inst).empty());
    if (kind == MetricKind::dense)
      CHECK(verify_metric(*inst.metric, Rational(0)).empty());
    if (greedy_feasible(inst)) ++greedy_hits;
  }
  // Bounds are drawn around a planted feasible set.
  CHECK(greedy_hits >= draws / 2);
}

TEST_CASE("parse_cnf: minimal formula") {
  CnfFormula cnf = parse_cnf("c comment\np cnf 3 1\n1 -2 3 0\n");
  CHECK(cnf.num_vars == 3);
  REQUIRE(cnf.clause_count() == 1);
  CHECK(cnf.clauses[0] == std::vector<int>{1, -2, 3});
}

TEST_CASE("parse_cnf: empty clause and malformed input are rejected") {
  CHECK_THROWS_AS(parse_cnf("p cnf 1 1\n0\n"), CnfParseError);
  CHECK_THROWS_AS(parse_cnf("p cnf 1 1\n2 0\n"), CnfParseError);   // var out of range
  CHECK_THROWS_AS(parse_cnf("p dnf 1 1\n1 0\n"), CnfParseError);   // bad header
  CHECK_THROWS_AS(parse_cnf("1 0\n"), CnfParseError);              // clause first
  CHECK_THROWS_AS(parse_cnf("p cnf 1 2\n1 0\n"), CnfParseError);   // count mismatch
}

TEST_CASE("parse_cnf/serialize_cnf round-trip on random formulas") {
  std::mt19937_64 rng(193);
  for (int it = 0; it < 30; ++it) {
    CnfFormula cnf;
    cnf.num_vars = static_cast<int>(rand_range(rng, 1, 6));
    const int m = static_cast<int>(rand_range(rng, 1, 8));
    for (int i = 0; i < m; ++i) {
      std::vector<int> clause;
      int len = static_cast<int>(rand_range(rng, 1, 3));
      for (int j = 0; j < len; ++j) {
        int var = static_cast<int>(rand_range(rng, 1, cnf.num_vars));
        clause.push_back(rand_range(rng, 0, 1) ? var : -var);
      }
      cnf.clauses.push_back(clause);
    }
    std::string canonical = serialize_cnf(cnf);
    CHECK(serialize_cnf(parse_cnf(canonical)) == canonical);
  }
}

TEST_CASE("gen_sat_reduction: instance parameters match the construction") {
  CnfFormula cnf = parse_cnf("p cnf 4 3\n1 2 3 0\n-1 2 4 0\n-2 -3 -4 0\n");
  ReductionArtifact art = gen_sat_reduction(cnf, 100);
  const int m = 3;
  CHECK(art.instance.clients.size() == m);
  CHECK(art.instance.facilities.size() == 8 * m);
  CHECK(art.instance.metric->size() == 9 * m + 1);
  CHECK(art.instance.k == m);
  CHECK(art.instance.metric->kind() == MetricKind::tree);
}

TEST_CASE("gen_sat_reduction: satisfiable formulas cost exactly k") {
  CnfFormula cnf = parse_cnf("p cnf 3 3\n1 2 3 0\n-1 2 3 0\n1 -2 -3 0\n");
  REQUIRE(max_satisfiable_clauses(cnf) == 3);
  ReductionArtifact art = gen_sat_reduction(cnf, 100);
  auto sol = brute_force_solve(art.instance);
  REQUIRE(sol.has_value());
  CHECK(sol->cost == Rational(art.instance.k));
}

TEST_CASE("gen_sat_reduction: unsatisfiable formulas pay D per missed clause") {
  // x and not-x as padded 3-literal clauses; every assignment misses one.
  CnfFormula cnf = parse_cnf("p cnf 1 2\n1 0\n-1 0\n");
  int u = cnf.clause_count() - max_satisfiable_clauses(cnf);
  REQUIRE(u == 1);
  ReductionArtifact art = gen_sat_reduction(cnf, 100);
  CHECK(art.padded_clauses == std::vector<int>{0, 1});
  auto sol = brute_force_solve(art.instance);
  REQUIRE(sol.has_value());
  CHECK(sol->cost == Rational((art.instance.k - u) + 100 * u));
}

TEST_CASE("gen_sat_reduction: every assignment induces a feasible selection") {
  CnfFormula cnf = parse_cnf("p cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n");
  ReductionArtifact art = gen_sat_reduction(cnf, 50);
  const Instance& inst = art.instance;
  // group gadget facilities by gadget, keyed by their partial assignments
  for (unsigned long long sigma = 0; sigma < (1ULL << cnf.num_vars); ++sigma) {
    std::vector<int> centers;
    for (int gadget = 0; gadget < inst.k; ++gadget) {
      for (int f : inst.facilities) {
        const auto& prov = art.provenance.at(f);
        if (prov.gadget != gadget) continue;
        bool matches = true;
        for (const auto& [var, val] : prov.partial)
          if (((sigma >> (var - 1)) & 1ULL) != static_cast<unsigned long long>(val))
            matches = false;
        if (matches) {
          centers.push_back(f);
          break;
        }
      }
    }
    REQUIRE(centers.size() == static_cast<size_t>(inst.k));
    auto rep = check_feasibility(inst, centers);
    CHECK(rep.ok());
  }
}

TEST_CASE("gen_sat_reduction: feasible selections induce consistent partials") {
  CnfFormula cnf = parse_cnf("p cnf 2 2\n1 2 2 0\n-1 -2 -2 0\n");
  ReductionArtifact art = gen_sat_reduction(cnf, 30);
  const Instance& inst = art.instance;
  const int nf = static_cast<int>(inst.facilities.size());
  for (unsigned mask = 0; mask < (1u << nf); ++mask) {
    if (__builtin_popcount(mask) != inst.k) continue;
    std::vector<int> centers;
    for (int i = 0; i < nf; ++i)
      if (mask & (1u << i)) centers.push_back(inst.facilities[i]);
    auto rep = check_feasibility(inst, centers);
    if (!rep.fair_range_all_ok()) continue;
    // derive per-variable assignments across all selected facilities
    std::map<int, std::set<bool>> assigned;
    for (int f : centers)
      for (const auto& [var, val] : art.provenance.at(f).partial)
        assigned[var].insert(val);
    for (const auto& [var, vals] : assigned) CHECK(vals.size() == 1);
  }
}

TEST_CASE("lower-only reductions keep the same feasible sets") {
  CnfFormula cnf = parse_cnf("p cnf 2 2\n1 2 2 0\n-1 -2 -2 0\n");
  ReductionArtifact range = gen_sat_reduction(cnf, 40, BoundsMode::range);
  ReductionArtifact lower = gen_sat_reduction(cnf, 40, BoundsMode::lower_only);
  const int nf = static_cast<int>(range.instance.facilities.size());
  REQUIRE(lower.instance.facilities.size() == static_cast<size_t>(nf));
  for (int g = 0; g < lower.instance.group_count(); ++g)
    CHECK(lower.instance.upper[g] == lower.instance.k);
  int feasible_sets = 0;
  for (unsigned mask = 0; mask < (1u << nf); ++mask) {
    if (__builtin_popcount(mask) > range.instance.k) continue;
    std::vector<int> centers;
    for (int i = 0; i < nf; ++i)
      if (mask & (1u << i)) centers.push_back(range.instance.facilities[i]);
    bool f_range = check_feasibility(range.instance, centers).fair_range_all_ok();
    bool f_lower = check_feasibility(lower.instance, centers).fair_range_all_ok();
    CHECK(f_range == f_lower);
    feasible_sets += f_range;
  }
  CHECK(feasible_sets > 0);
}

TEST_CASE("gen_gap_sat_reduction: kappa = m mirrors the per-clause shape") {
  CnfFormula cnf = parse_cnf("p cnf 3 2\n1 2 3 0\n-1 -2 3 0\n");
  ReductionArtifact art = gen_gap_sat_reduction(cnf, 2, 100);
  CHECK(art.instance.clients.size() == 2);
  CHECK(art.instance.k == 2);
  CHECK(art.instance.facilities.size() == 16);  // 2^3 per super-clause
}

TEST_CASE("gen_gap_sat_reduction: kappa = 1 collapses to one client") {
  CnfFormula cnf = parse_cnf("p cnf 3 2\n1 2 3 0\n-1 -2 3 0\n");
  ReductionArtifact art = gen_gap_sat_reduction(cnf, 1, 100);
  CHECK(art.instance.clients.size() == 1);
  CHECK(art.instance.facilities.size() <= 8);
  CHECK(art.instance.k == 1);
}

TEST_CASE("gen_gap_sat_reduction: satisfiable gives oracle cost kappa") {
  CnfFormula cnf = parse_cnf("p cnf 4 4\n1 2 3 0\n-1 2 4 0\n1 -2 -3 0\n2 3 4 0\n");
  REQUIRE(max_satisfiable_clauses(cnf) == 4);
  ReductionArtifact art = gen_gap_sat_reduction(cnf, 2, 100);
  auto sol = brute_force_solve(art.instance);
  REQUIRE(sol.has_value());
  CHECK(sol->cost == Rational(2));
}

TEST_CASE("gen_gap_sat_reduction: variable cap refusal") {
  // One super-clause would hold all 21 variables.
  std::string text = "p cnf 21 7\n";
  for (int i = 0; i < 7; ++i)
    text += std::to_string(3 * i + 1) + " " + std::to_string(3 * i + 2) + " " +
            std::to_string(3 * i + 3) + " 0\n";
  CnfFormula cnf = parse_cnf(text);
  CHECK_THROWS_AS(gen_gap_sat_reduction(cnf, 1, 100), WorkCapExceeded);
}

TEST_CASE("oracle cost never exceeds any other solver's cost") {
  std::mt19937_64 rng(197);
  int done = 0;
  while (done < 10) {
    RandomInstanceParams params;
    params.n = 8;
    params.k = 2;
    params.t = 1;
    Instance inst = gen_random_instance(params, rng());
    auto oracle = brute_force_solve(inst);
    if (!oracle) continue;
    ++done;
    auto fpt = fpt_solve(inst, 0.2);
    REQUIRE(fpt.has_value());
    CHECK(oracle->cost <= fpt->cost);
    auto greedy = greedy_feasible(inst);
    if (greedy) {
      auto assigned = optimal_assignment(inst, *greedy);
      if (assigned) CHECK(oracle->cost <= assigned->cost);
    }
  }
}
