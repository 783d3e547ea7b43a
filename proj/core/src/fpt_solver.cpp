#include "cfrk/fpt_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "cfrk/assignment.hpp"
#include "cfrk/generators.hpp"

namespace cfrk {

CharacteristicPartition characteristic_partition(const Instance& inst) {
  const int t = inst.group_count();
  if (t > 30) throw std::invalid_argument("characteristic_partition: t > 30");
  std::map<int, CharVec> mask;
  for (int f : inst.facilities) mask[f] = 0;
  for (int g = 0; g < t; ++g)
    for (int f : inst.groups[g]) mask[f] |= CharVec(1) << g;
  std::map<CharVec, std::vector<int>> cells;
  for (const auto& [f, m] : mask) cells[m].push_back(f);
  CharacteristicPartition out;
  out.t = t;
  for (auto& [key, members] : cells) {
    std::sort(members.begin(), members.end());
    out.cells.emplace_back(key, std::move(members));
  }
  return out;
}

std::vector<ConstraintPattern> enumerate_feasible_patterns(
    const CharacteristicPartition& partition, int k,
    const std::vector<long long>& alpha, const std::vector<long long>& beta) {
  const int t = partition.t;
  std::vector<ConstraintPattern> out;
  std::vector<CharVec> chosen;
  std::vector<long long> sum(t, 0);

  auto beta_ok = [&] {
    for (int g = 0; g < t; ++g)
      if (sum[g] > beta[g]) return false;
    return true;
  };
  auto alpha_ok = [&] {
    for (int g = 0; g < t; ++g)
      if (sum[g] < alpha[g]) return false;
    return true;
  };

  // Multisets as nondecreasing cell-index sequences; selection distinctness
  // caps a cell's multiplicity at its member count.
  std::function<void(size_t, int, int)> rec = [&](size_t cell, int left,
                                                  int used_here) {
    if (left == 0) {
      if (alpha_ok()) {
        ConstraintPattern p;
        p.cells = chosen;
        p.feasible = true;
        out.push_back(std::move(p));
      }
      return;
    }
    if (cell >= partition.cells.size()) return;
    // skip to next cell
    rec(cell + 1, left, 0);
    if (used_here >= static_cast<int>(partition.cells[cell].second.size())) return;
    const CharVec key = partition.cells[cell].first;
    chosen.push_back(key);
    for (int g = 0; g < t; ++g)
      if (key & (CharVec(1) << g)) ++sum[g];
    if (beta_ok()) rec(cell, left - 1, used_here + 1);
    for (int g = 0; g < t; ++g)
      if (key & (CharVec(1) << g)) --sum[g];
    chosen.pop_back();
  };
  rec(0, k, 0);
  std::sort(out.begin(), out.end(),
            [](const ConstraintPattern& a, const ConstraintPattern& b) {
              return a.cells < b.cells;
            });
  return out;
}

Coreset build_coreset(const Instance& inst, double eps1, CoresetMode mode,
                      std::uint64_t seed) {
  Coreset cs;
  cs.eps1 = eps1;
  cs.mode = mode;
  if (mode == CoresetMode::identity || eps1 <= 0.0) {
    cs.mode = CoresetMode::identity;
    cs.clients = inst.clients;
    for (int c : inst.clients) cs.weights.push_back(inst.weight_of(c));
    return cs;
  }
  const double n = std::max<double>(inst.metric->size(), 3);
  const double logn = std::log2(n);
  double target = static_cast<double>(inst.k) * inst.k * logn * logn /
                  (eps1 * eps1 * eps1);
  std::size_t size = static_cast<std::size_t>(std::ceil(target));
  if (size >= inst.clients.size()) {
    cs.mode = CoresetMode::identity;
    cs.clients = inst.clients;
    for (int c : inst.clients) cs.weights.push_back(inst.weight_of(c));
    return cs;
  }
  std::mt19937_64 rng(seed);
  std::vector<int> pool = inst.clients;
  for (size_t i = 0; i < size; ++i) {
    size_t j = static_cast<size_t>(
        rand_range(rng, static_cast<long long>(i),
                   static_cast<long long>(pool.size()) - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  cs.clients = pool;
  Rational w(static_cast<long long>(inst.clients.size()),
             static_cast<long long>(size));
  cs.weights.assign(size, w);
  return cs;
}

OpgInstance build_opg_instance(const Instance& inst,
                               const ConstraintPattern& pattern,
                               const Coreset& coreset) {
  CharacteristicPartition partition = characteristic_partition(inst);
  std::map<CharVec, const std::vector<int>*> cell_members;
  for (const auto& [key, members] : partition.cells) cell_members[key] = &members;

  OpgInstance opg;
  opg.k = static_cast<int>(pattern.cells.size());
  opg.objective = inst.objective;
  opg.metric = inst.metric;
  opg.coreset_clients = coreset.clients;
  opg.coreset_weights = coreset.weights;

  std::map<CharVec, int> copies_so_far;
  long long next_alias = inst.metric->size();
  for (CharVec key : pattern.cells) {
    auto it = cell_members.find(key);
    if (it == cell_members.end())
      throw std::invalid_argument("build_opg_instance: pattern uses empty cell");
    const std::vector<int>& members = *it->second;
    int copy = copies_so_far[key]++;
    if (copy >= static_cast<int>(members.size()))
      throw std::invalid_argument(
          "build_opg_instance: pattern multiplicity exceeds cell size");
    OpgGroup group;
    group.cell = key;
    group.copy_index = copy;
    group.originals = members;
    for (int f : members) {
      if (copy == 0) {
        group.alias_ids.push_back(f);
      } else {
        group.alias_ids.push_back(next_alias);
        opg.duplicate_map[next_alias] = f;
        ++next_alias;
      }
      opg.capacity[f] = inst.capacity_of(f);
    }
    opg.groups.push_back(std::move(group));
  }
  return opg;
}

namespace {

struct GuessSearch {
  const OpgInstance& opg;
  FptStats* stats;
  std::vector<int> leaders;          // per position, coreset client point ids
  std::vector<int> group_of;         // per position, group index
  std::vector<int> order;            // processing order over positions
  std::set<int> used;                // original ids consumed so far
  std::vector<int> picks;            // per step, chosen original
  std::set<std::vector<int>> seen_sets;
  std::optional<Solution> best;

  explicit GuessSearch(const OpgInstance& o, FptStats* s) : opg(o), stats(s) {}

  void evaluate_selection() {
    if (stats) ++stats->guesses;
    std::vector<int> centers = picks;
    std::sort(centers.begin(), centers.end());
    if (!seen_sets.insert(centers).second) return;
    if (stats) ++stats->evaluated;
    TransportationProblem tp;
    tp.metric = opg.metric.get();
    tp.objective = opg.objective;
    tp.clients = opg.coreset_clients;
    tp.supplies = opg.coreset_weights;
    tp.centers = centers;
    for (int f : centers) tp.capacities.push_back(opg.capacity.at(f));
    auto sol = solve_transportation(tp);
    if (sol && (!best || sol->cost < best->cost)) best = std::move(sol);
  }

  void dfs(size_t step) {
    if (best && best->cost.is_zero()) return;  // nothing can beat zero
    if (step == order.size()) {
      evaluate_selection();
      return;
    }
    const int pos = order[step];
    const int leader = leaders[pos];
    const OpgGroup& group = opg.groups[group_of[pos]];
    // Effective radii: the distinct leader-to-member distances. Every ball
    // realized by the geometric ladder equals the ball of one of these, and
    // the exact optimal radius is always present.
    std::vector<Rational> radii;
    for (int f : group.originals) radii.push_back(opg.metric->dist(leader, f));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    int last_pick = -1;
    bool advanced = false;
    for (const Rational& r : radii) {
      int pick = -1;
      long long pick_cap = -1;
      for (int f : group.originals) {
        if (used.count(f)) continue;
        if (r < opg.metric->dist(leader, f)) continue;
        long long cap = opg.capacity.at(f);
        if (cap > pick_cap || (cap == pick_cap && f < pick)) {
          pick = f;
          pick_cap = cap;
        }
      }
      if (pick == -1 || pick == last_pick) continue;
      last_pick = pick;
      advanced = true;
      used.insert(pick);
      picks.push_back(pick);
      dfs(step + 1);
      picks.pop_back();
      used.erase(pick);
    }
    if (!advanced && stats) ++stats->pruned;
  }
};

void multisets(int n, int k, std::vector<int>& cur,
               const std::function<void(const std::vector<int>&)>& fn, int from = 0) {
  if (static_cast<int>(cur.size()) == k) {
    fn(cur);
    return;
  }
  for (int i = from; i < n; ++i) {
    cur.push_back(i);
    multisets(n, k, cur, fn, i);
    cur.pop_back();
  }
}

}  // namespace

std::optional<Solution> leader_guess_solve(const OpgInstance& opg, double eps3,
                                           FptStats* stats) {
  (void)eps3;  // effective radii dominate every (1+eps3) ladder choice
  const int k = opg.k;
  GuessSearch search(opg, stats);

  if (opg.coreset_clients.empty()) {
    // No clients: any one-per-group selection costs zero.
    search.leaders.assign(k, -1);
    std::vector<int> picks;
    std::set<int> used;
    for (const auto& g : opg.groups) {
      int pick = -1;
      long long cap = -1;
      for (int f : g.originals)
        if (!used.count(f) && opg.capacity.at(f) > cap) {
          pick = f;
          cap = opg.capacity.at(f);
        }
      used.insert(pick);
      picks.push_back(pick);
    }
    Solution sol;
    sol.centers = picks;
    std::sort(sol.centers.begin(), sol.centers.end());
    sol.cost = Rational(0);
    return sol;
  }

  bool has_duplicates = false;
  {
    std::set<CharVec> cells;
    for (const auto& g : opg.groups)
      if (!cells.insert(g.cell).second) has_duplicates = true;
  }

  std::vector<int> group_ids(k);
  for (int i = 0; i < k; ++i) group_ids[i] = i;
  std::vector<int> natural(k);
  for (int i = 0; i < k; ++i) natural[i] = i;

  std::vector<int> leader_idx;
  multisets(static_cast<int>(opg.coreset_clients.size()), k, leader_idx,
            [&](const std::vector<int>& leaders) {
              search.leaders.resize(k);
              for (int i = 0; i < k; ++i)
                search.leaders[i] = opg.coreset_clients[leaders[i]];
              // pairings: every assignment of groups to leader positions
              std::vector<int> perm = group_ids;
              do {
                search.group_of = perm;
                if (has_duplicates && k <= 6) {
                  // Collision handling depends on processing order when
                  // duplicate cells share originals; try every order.
                  std::vector<int> ord = natural;
                  do {
                    search.order = ord;
                    search.dfs(0);
                  } while (std::next_permutation(ord.begin(), ord.end()));
                } else {
                  search.order = natural;
                  search.dfs(0);
                }
              } while (std::next_permutation(perm.begin(), perm.end()));
            });
  return search.best;
}

std::optional<Solution> fpt_solve(
    const Instance& inst, double eps, FptStats* stats,
    const std::function<void(const std::string&)>& progress,
    CoresetMode coreset_mode, double eps1, std::uint64_t seed) {
  if (eps <= 0) throw std::invalid_argument("fpt_solve: eps must be positive");
  const double eps3 = inst.objective == Objective::median ? eps / 2 : eps / 16;
  Coreset coreset = build_coreset(inst, eps1, coreset_mode, seed);
  CharacteristicPartition partition = characteristic_partition(inst);
  auto patterns =
      enumerate_feasible_patterns(partition, inst.k, inst.lower, inst.upper);
  if (stats) stats->patterns = static_cast<long long>(patterns.size());

  std::optional<Solution> best;
  for (size_t pi = 0; pi < patterns.size(); ++pi) {
    OpgInstance opg = build_opg_instance(inst, patterns[pi], coreset);
    FptStats local;
    auto sol = leader_guess_solve(opg, eps3, &local);
    if (stats) {
      stats->guesses += local.guesses;
      stats->pruned += local.pruned;
      stats->evaluated += local.evaluated;
    }
    if (sol) {
      // Report against the full client set, not just the coreset.
      auto full = optimal_assignment(inst, sol->centers);
      if (full && (!best || full->cost < best->cost)) best = std::move(full);
    }
    if (progress)
      progress("pattern " + std::to_string(pi + 1) + "/" +
               std::to_string(patterns.size()) + ": guesses=" +
               std::to_string(local.guesses) + " pruned=" +
               std::to_string(local.pruned) + " evaluated=" +
               std::to_string(local.evaluated) +
               (best ? " best=" + best->cost.str() : " best=inf"));
  }
  return best;
}

}  // namespace cfrk
