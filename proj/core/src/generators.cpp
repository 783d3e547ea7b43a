#include "cfrk/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cfrk/oracle.hpp"

namespace cfrk {

long long rand_range(std::mt19937_64& rng, long long lo, long long hi) {
  if (lo > hi) throw std::invalid_argument("rand_range: empty range");
  unsigned long long span = static_cast<unsigned long long>(hi - lo) + 1;
  return lo + static_cast<long long>(rng() % span);
}

namespace {

std::vector<std::string> point_names(int n) {
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "p" + std::to_string(i);
  return names;
}

}  // namespace

Instance gen_random_instance(const RandomInstanceParams& params, std::uint64_t seed) {
  if (params.n < 2 || params.k < 1 || params.t < 0 || params.cap_min < 0 ||
      params.cap_max < params.cap_min)
    throw std::invalid_argument("gen_random_instance: bad parameters");
  std::mt19937_64 rng(seed);

  for (int attempt = 0; attempt < params.rejection_cap; ++attempt) {
    const int n = params.n;

    // Roles: every point is a client, a facility, or both.
    std::vector<char> is_client(n, 0), is_facility(n, 0);
    for (int i = 0; i < n; ++i) {
      switch (rand_range(rng, 0, 2)) {
        case 0: is_client[i] = 1; break;
        case 1: is_facility[i] = 1; break;
        default: is_client[i] = is_facility[i] = 1; break;
      }
    }
    std::vector<int> fac_pool;
    for (int i = 0; i < n; ++i)
      if (is_facility[i]) fac_pool.push_back(i);
    while (static_cast<int>(fac_pool.size()) < params.k) {
      int i = static_cast<int>(rand_range(rng, 0, n - 1));
      if (!is_facility[i]) {
        is_facility[i] = 1;
        fac_pool.push_back(i);
      }
    }
    if (std::none_of(is_client.begin(), is_client.end(), [](char c) { return c; }))
      is_client[static_cast<int>(rand_range(rng, 0, n - 1))] = 1;

    std::shared_ptr<const MetricSpace> metric;
    if (params.metric_kind == MetricKind::tree) {
      std::vector<TreeEdge> edges;
      for (int i = 1; i < n; ++i)
        edges.push_back({static_cast<int>(rand_range(rng, 0, i - 1)), i,
                         Rational(rand_range(rng, 1, params.edge_max))});
      metric = std::make_shared<MetricSpace>(
          MetricSpace::from_tree(point_names(n), 0, std::move(edges)));
    } else {
      // L1 grid points: integer distances, metric by construction.
      std::vector<std::pair<long long, long long>> pts(n);
      for (auto& p : pts)
        p = {rand_range(rng, 0, params.coord_range),
             rand_range(rng, 0, params.coord_range)};
      std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
      bool all_zero = true;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          long long l1 = std::llabs(pts[i].first - pts[j].first) +
                         std::llabs(pts[i].second - pts[j].second);
          d[i][j] = Rational(l1);
          if (l1 != 0) all_zero = false;
        }
      if (all_zero) continue;
      metric = std::make_shared<MetricSpace>(
          MetricSpace::from_matrix(point_names(n), std::move(d)));
    }

    Instance inst;
    inst.k = params.k;
    inst.objective = params.objective;
    inst.metric = metric;
    for (int i = 0; i < n; ++i) {
      if (is_client[i]) inst.clients.push_back(i);
      if (is_facility[i]) inst.facilities.push_back(i);
    }
    for (int f : inst.facilities)
      inst.capacity[f] = rand_range(rng, params.cap_min, params.cap_max);

    // Groups by coin flip; empty groups get one random member.
    inst.groups.resize(params.t);
    for (int g = 0; g < params.t; ++g) {
      for (int f : inst.facilities)
        if (rand_range(rng, 0, 1)) inst.groups[g].push_back(f);
      if (inst.groups[g].empty())
        inst.groups[g].push_back(inst.facilities[rand_range(
            rng, 0, static_cast<long long>(inst.facilities.size()) - 1)]);
    }

    // Plant a capacity-covering k-set and draw bounds around it.
    std::vector<int> pool = inst.facilities;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> planted(pool.begin(), pool.begin() + params.k);
    Rational planted_cap(0);
    for (int f : planted) planted_cap += Rational(inst.capacity_of(f));
    if (planted_cap < inst.total_client_weight()) continue;

    inst.lower.resize(params.t);
    inst.upper.resize(params.t);
    std::set<int> planted_set(planted.begin(), planted.end());
    for (int g = 0; g < params.t; ++g) {
      long long cnt = 0;
      for (int f : inst.groups[g]) cnt += planted_set.count(f);
      long long hi = std::min<long long>(params.k, inst.groups[g].size());
      inst.lower[g] = rand_range(rng, 0, cnt);
      inst.upper[g] = rand_range(rng, cnt, std::max(cnt, hi));
    }

    if (!validate_instance(inst).empty()) continue;
    return inst;
  }
  throw std::runtime_error(
      "gen_random_instance: rejection cap exhausted; loosen capacities or bounds");
}

namespace {

struct GadgetSpec {
  std::vector<int> vars;                  // distinct, sorted, 1-based
  std::vector<std::vector<int>> clauses;  // member clauses (literal lists)
};

// Shared builder for the per-clause and super-clause reductions.
ReductionArtifact build_reduction(const std::vector<GadgetSpec>& gadgets,
                                  ReductionMode mode, long long D,
                                  BoundsMode bounds, ReductionCapacities caps,
                                  std::vector<int> padded) {
  const int g_count = static_cast<int>(gadgets.size());
  std::vector<std::string> names;
  std::vector<int> client_node(g_count);
  for (int i = 0; i < g_count; ++i) {
    client_node[i] = static_cast<int>(names.size());
    names.push_back("c" + std::to_string(i));
  }

  ReductionArtifact art;
  art.mode = mode;
  art.bounds = bounds;
  art.capacities = caps;
  art.d_param = D;
  art.padded_clauses = std::move(padded);

  // Facilities, one per partial assignment of each gadget's variables.
  std::vector<std::vector<int>> gadget_facilities(g_count);
  // facility -> (var -> value) for group construction
  std::vector<std::vector<std::pair<int, bool>>> partials;
  std::vector<TreeEdge> edges;
  for (int i = 0; i < g_count; ++i) {
    const auto& vars = gadgets[i].vars;
    const int nv = static_cast<int>(vars.size());
    for (unsigned mask = 0; mask < (1u << nv); ++mask) {
      int node = static_cast<int>(names.size());
      names.push_back("f" + std::to_string(i) + "_" + std::to_string(mask));
      gadget_facilities[i].push_back(node);
      std::vector<std::pair<int, bool>> partial;
      unsigned long long assignment = 0;
      for (int b = 0; b < nv; ++b) {
        bool val = (mask >> b) & 1u;
        partial.emplace_back(vars[b], val);
        if (val) assignment |= 1ULL << (vars[b] - 1);
      }
      bool satisfied = true;
      for (const auto& cl : gadgets[i].clauses)
        satisfied = satisfied && clause_satisfied(cl, assignment);
      edges.push_back({client_node[i], node, Rational(satisfied ? 1 : D)});
      partials.push_back(std::move(partial));
      art.provenance[node] = {i, partials.back()};
    }
  }
  int s_node = static_cast<int>(names.size());
  names.push_back("s");
  for (int i = 0; i < g_count; ++i) edges.push_back({s_node, client_node[i], Rational(1)});
  art.dummy_node = s_node;
  art.clients = client_node;

  Instance inst;
  inst.k = g_count;
  inst.objective = Objective::median;
  inst.metric = std::make_shared<MetricSpace>(
      MetricSpace::from_tree(std::move(names), s_node, std::move(edges)));
  inst.clients = client_node;
  for (int i = 0; i < g_count; ++i)
    for (int f : gadget_facilities[i]) inst.facilities.push_back(f);
  long long cap = caps == ReductionCapacities::unit ? 1 : g_count;
  for (int f : inst.facilities) inst.capacity[f] = cap;

  const long long upper_default = bounds == BoundsMode::range ? 1 : g_count;

  // Gadget groups: exactly one selected facility per gadget.
  for (int i = 0; i < g_count; ++i) {
    inst.groups.push_back(gadget_facilities[i]);
    inst.lower.push_back(1);
    inst.upper.push_back(upper_default);
  }

  // Assignment groups: for each variable, each gadget pair containing it and
  // each value a, the facilities of the first gadget assigning a plus the
  // facilities of the second assigning 1-a; exactly one may be selected.
  auto assigns = [&](int facility, int var, bool val) {
    const auto& p = art.provenance.at(facility).partial;
    for (const auto& [v, b] : p)
      if (v == var) return b == val;
    return false;
  };
  std::set<int> all_vars;
  for (const auto& g : gadgets) all_vars.insert(g.vars.begin(), g.vars.end());
  for (int var : all_vars) {
    std::vector<int> holders;
    for (int i = 0; i < g_count; ++i)
      if (std::binary_search(gadgets[i].vars.begin(), gadgets[i].vars.end(), var))
        holders.push_back(i);
    for (size_t a = 0; a < holders.size(); ++a)
      for (size_t b = a + 1; b < holders.size(); ++b)
        for (int val = 0; val < 2; ++val) {
          std::vector<int> members;
          for (int f : gadget_facilities[holders[a]])
            if (assigns(f, var, val)) members.push_back(f);
          for (int f : gadget_facilities[holders[b]])
            if (assigns(f, var, !val)) members.push_back(f);
          inst.groups.push_back(std::move(members));
          inst.lower.push_back(1);
          inst.upper.push_back(upper_default);
        }
  }

  art.instance = std::move(inst);
  return art;
}

std::vector<std::vector<int>> pad_to_three(const CnfFormula& cnf,
                                           std::vector<int>& padded) {
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < cnf.clauses.size(); ++i) {
    auto cl = cnf.clauses[i];
    if (cl.empty()) throw std::invalid_argument("reduction: empty clause");
    if (cl.size() < 3) padded.push_back(static_cast<int>(i));
    while (cl.size() < 3) cl.push_back(cl.front());
    out.push_back(std::move(cl));
  }
  return out;
}

std::vector<int> distinct_vars(const std::vector<std::vector<int>>& clauses) {
  std::set<int> vars;
  for (const auto& cl : clauses)
    for (int lit : cl) vars.insert(std::abs(lit));
  return std::vector<int>(vars.begin(), vars.end());
}

}  // namespace

ReductionArtifact gen_sat_reduction(const CnfFormula& cnf, long long D,
                                    BoundsMode bounds, ReductionCapacities caps) {
  if (D < 1) throw std::invalid_argument("gen_sat_reduction: D must be >= 1");
  if (cnf.clauses.empty()) throw std::invalid_argument("gen_sat_reduction: no clauses");
  std::vector<int> padded;
  auto clauses = pad_to_three(cnf, padded);
  std::vector<GadgetSpec> gadgets;
  for (auto& cl : clauses) {
    GadgetSpec g;
    g.vars = distinct_vars({cl});
    g.clauses = {cl};
    gadgets.push_back(std::move(g));
  }
  return build_reduction(gadgets, ReductionMode::per_clause, D, bounds, caps,
                         std::move(padded));
}

ReductionArtifact gen_gap_sat_reduction(const CnfFormula& cnf, int kappa,
                                        long long D, BoundsMode bounds,
                                        ReductionCapacities caps, int var_cap) {
  if (D < 1 || kappa < 1)
    throw std::invalid_argument("gen_gap_sat_reduction: bad parameters");
  if (cnf.clauses.empty())
    throw std::invalid_argument("gen_gap_sat_reduction: no clauses");
  if (cnf.num_vars < 1)
    throw std::invalid_argument("gen_gap_sat_reduction: no variables");
  std::vector<int> padded;
  auto clauses = pad_to_three(cnf, padded);
  // Pad with trivially-true clauses until kappa divides the count.
  while (clauses.size() % static_cast<size_t>(kappa) != 0) {
    padded.push_back(static_cast<int>(clauses.size()));
    clauses.push_back({1, -1, 1});
  }
  const int block = static_cast<int>(clauses.size()) / kappa;
  std::vector<GadgetSpec> gadgets(kappa);
  for (int i = 0; i < kappa; ++i) {
    gadgets[i].clauses.assign(clauses.begin() + i * block,
                              clauses.begin() + (i + 1) * block);
    gadgets[i].vars = distinct_vars(gadgets[i].clauses);
    if (static_cast<int>(gadgets[i].vars.size()) > var_cap)
      throw WorkCapExceeded(
          "gen_gap_sat_reduction: super-clause has " +
          std::to_string(gadgets[i].vars.size()) + " variables > cap " +
          std::to_string(var_cap) + "; facility count would blow up");
  }
  ReductionArtifact art = build_reduction(gadgets, ReductionMode::super_clause, D,
                                          bounds, caps, std::move(padded));
  art.kappa = kappa;
  return art;
}

}  // namespace cfrk
