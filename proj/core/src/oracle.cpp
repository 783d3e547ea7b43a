#include "cfrk/oracle.hpp"

#include <algorithm>

#include "cfrk/assignment.hpp"

namespace cfrk {

namespace {

struct Search {
  const Instance& inst;
  const OracleOptions& opts;
  std::vector<int> facilities;               // sorted for lexicographic order
  std::vector<std::vector<int>> fac_groups;  // facility idx -> group ids
  std::vector<long long> count;              // per-group selection count
  std::vector<int> current;
  long long visited = 0;
  std::optional<Solution> best;

  explicit Search(const Instance& i, const OracleOptions& o)
      : inst(i), opts(o), facilities(i.facilities) {
    std::sort(facilities.begin(), facilities.end());
    fac_groups.resize(facilities.size());
    for (size_t gi = 0; gi < inst.groups.size(); ++gi)
      for (int f : inst.groups[gi]) {
        auto it = std::lower_bound(facilities.begin(), facilities.end(), f);
        fac_groups[it - facilities.begin()].push_back(static_cast<int>(gi));
      }
    count.assign(inst.groups.size(), 0);
  }

  bool upper_ok(size_t fi) const {
    for (int g : fac_groups[fi])
      if (count[g] + 1 > inst.upper[g]) return false;
    return true;
  }

  // Each further pick raises any one group count by at most 1.
  bool lower_reachable(int picks_left) const {
    for (size_t g = 0; g < count.size(); ++g)
      if (inst.lower[g] - count[g] > picks_left) return false;
    return true;
  }

  void consider_current() {
    for (size_t g = 0; g < count.size(); ++g)
      if (count[g] < inst.lower[g]) return;
    auto sol = optimal_assignment(inst, current);
    if (!sol) return;
    if (!best || sol->cost < best->cost) best = std::move(sol);
  }

  void recurse(size_t from, int picks_left) {
    if (++visited > opts.work_cap)
      throw WorkCapExceeded(
          "brute_force_solve: work cap exceeded; refusing to approximate");
    if (picks_left == 0 || opts.at_most_k) consider_current();
    if (picks_left == 0) return;
    for (size_t fi = from; fi < facilities.size(); ++fi) {
      if (facilities.size() - fi < static_cast<size_t>(picks_left) &&
          !opts.at_most_k)
        break;
      if (!upper_ok(fi)) continue;
      current.push_back(facilities[fi]);
      for (int g : fac_groups[fi]) ++count[g];
      if (lower_reachable(picks_left - 1)) recurse(fi + 1, picks_left - 1);
      for (int g : fac_groups[fi]) --count[g];
      current.pop_back();
    }
  }
};

}  // namespace

std::optional<Solution> brute_force_solve(const Instance& inst,
                                          const OracleOptions& opts) {
  Search s(inst, opts);
  s.recurse(0, inst.k);
  return s.best;
}

}  // namespace cfrk
