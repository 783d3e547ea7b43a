#include "cfrk/instance.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "cfrk/assignment.hpp"

namespace cfrk {

std::string objective_name(Objective o) {
  return o == Objective::median ? "median" : "means";
}

std::optional<Objective> objective_from_name(std::string_view s) {
  if (s == "median") return Objective::median;
  if (s == "means") return Objective::means;
  return std::nullopt;
}

Rational Instance::weight_of(int client) const {
  auto it = client_weight.find(client);
  return it == client_weight.end() ? Rational(1) : it->second;
}

Rational Instance::total_client_weight() const {
  Rational total(0);
  for (int c : clients) total += weight_of(c);
  return total;
}

long long Instance::capacity_of(int facility) const {
  auto it = capacity.find(facility);
  if (it != capacity.end()) return it->second;
  return total_client_weight().ceil();
}

Rational Instance::cost_term(int client, int facility) const {
  const Rational& d = dist(client, facility);
  return objective == Objective::means ? d * d : d;
}

Instance Instance::with_metric(std::shared_ptr<const MetricSpace> m) const {
  Instance copy = *this;
  copy.metric = std::move(m);
  return copy;
}

bool Solution::is_integral(const Instance& inst) const {
  for (const auto& a : assignment)
    if (a.amount != inst.weight_of(a.client) && !a.amount.is_zero()) return false;
  return true;
}

bool FeasibilityReport::fair_range_all_ok() const {
  for (bool b : fair_range_ok)
    if (!b) return false;
  return true;
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  if (inst.k <= 0) out.push_back("k: must be positive");
  if (!inst.metric) {
    out.push_back("metric: missing");
    return out;
  }
  const int n = inst.metric->size();
  auto in_range = [&](int p) { return p >= 0 && p < n; };
  for (int c : inst.clients)
    if (!in_range(c)) out.push_back("clients: point index out of metric range");
  for (int f : inst.facilities)
    if (!in_range(f)) out.push_back("facilities: point index out of metric range");
  std::set<int> fac(inst.facilities.begin(), inst.facilities.end());
  if (fac.size() != inst.facilities.size())
    out.push_back("facilities: duplicate facility id");
  if (inst.k > static_cast<int>(fac.size()))
    out.push_back("k: exceeds number of facilities");
  if (inst.lower.size() != inst.groups.size())
    out.push_back("alpha: length differs from group count");
  if (inst.upper.size() != inst.groups.size())
    out.push_back("beta: length differs from group count");
  for (size_t i = 0; i < inst.groups.size(); ++i) {
    const std::string tag = "group[" + std::to_string(i) + "]";
    std::set<int> members;
    for (int f : inst.groups[i]) {
      if (!fac.count(f)) out.push_back(tag + ": member not a facility");
      if (!members.insert(f).second) out.push_back(tag + ": duplicate member");
    }
    if (i < inst.lower.size() && inst.lower[i] < 0)
      out.push_back("alpha[" + std::to_string(i) + "]: negative");
    if (i < inst.lower.size() && i < inst.upper.size() &&
        inst.lower[i] > inst.upper[i])
      out.push_back("alpha[" + std::to_string(i) + "] > beta[" +
                    std::to_string(i) + "]");
    if (i < inst.upper.size() &&
        inst.upper[i] > static_cast<long long>(inst.groups[i].size()))
      out.push_back("beta[" + std::to_string(i) +
                    "]: exceeds group size (warning: vacuously loose)");
  }
  for (const auto& [f, cap] : inst.capacity) {
    if (!fac.count(f)) out.push_back("capacity: key not a facility");
    if (cap < 0) out.push_back("capacity: negative value");
  }
  for (const auto& [c, w] : inst.client_weight) {
    if (std::find(inst.clients.begin(), inst.clients.end(), c) ==
        inst.clients.end())
      out.push_back("weight: key not a client");
    if (w.is_negative()) out.push_back("weight: negative value");
  }
  return out;
}

FeasibilityReport check_feasibility(const Instance& inst,
                                    const std::vector<int>& centers) {
  std::set<int> fac(inst.facilities.begin(), inst.facilities.end());
  for (int s : centers)
    if (!fac.count(s))
      throw std::invalid_argument("check_feasibility: center is not a facility");
  std::set<int> sel(centers.begin(), centers.end());

  FeasibilityReport rep;
  rep.fair_range_ok.resize(inst.groups.size());
  rep.group_counts.resize(inst.groups.size());
  for (size_t i = 0; i < inst.groups.size(); ++i) {
    long long cnt = 0;
    for (int f : inst.groups[i]) cnt += sel.count(f);
    rep.group_counts[i] = cnt;
    rep.fair_range_ok[i] = inst.lower[i] <= cnt && cnt <= inst.upper[i];
  }

  Rational cap_total(0);
  for (int s : sel) cap_total += Rational(inst.capacity_of(s));
  rep.capacity_ok = inst.total_client_weight() <= cap_total;
  rep.assignment_ok =
      rep.capacity_ok &&
      optimal_assignment(inst, std::vector<int>(sel.begin(), sel.end()))
          .has_value();
  return rep;
}

Rational evaluate_cost(const Instance& inst, const Solution& sol) {
  std::set<int> sel(sol.centers.begin(), sol.centers.end());
  std::unordered_map<int, Rational> served;
  Rational total(0);
  for (const auto& a : sol.assignment) {
    if (!sel.count(a.center))
      throw std::invalid_argument(
          "evaluate_cost: assignment references non-selected center '" +
          inst.metric->name(a.center) + "'");
    if (a.amount.is_negative())
      throw std::invalid_argument("evaluate_cost: negative assignment amount");
    served[a.client] += a.amount;
    total += a.amount * inst.cost_term(a.client, a.center);
  }
  for (int c : inst.clients) {
    auto it = served.find(c);
    Rational got = it == served.end() ? Rational(0) : it->second;
    if (got != inst.weight_of(c))
      throw std::invalid_argument("evaluate_cost: client '" +
                                  inst.metric->name(c) +
                                  "' not served exactly its weight");
  }
  return total;
}

std::optional<std::vector<int>> greedy_feasible(const Instance& inst) {
  const int t = inst.group_count();
  std::vector<long long> count(t, 0);
  std::set<int> chosen;
  std::vector<std::vector<int>> member_groups;  // facility -> group indices
  std::unordered_map<int, int> fidx;
  for (size_t i = 0; i < inst.facilities.size(); ++i)
    fidx[inst.facilities[i]] = static_cast<int>(i);
  member_groups.resize(inst.facilities.size());
  for (int g = 0; g < t; ++g)
    for (int f : inst.groups[g]) member_groups[fidx[f]].push_back(g);

  auto breaches = [&](int f) {
    for (int g : member_groups[fidx[f]])
      if (count[g] + 1 > inst.upper[g]) return true;
    return false;
  };
  auto advances = [&](int f) {
    int adv = 0;
    for (int g : member_groups[fidx[f]])
      if (count[g] < inst.lower[g]) ++adv;
    return adv;
  };

  while (static_cast<int>(chosen.size()) < inst.k) {
    bool unmet = false;
    for (int g = 0; g < t; ++g)
      if (count[g] < inst.lower[g]) unmet = true;
    int best = -1, best_adv = 0;
    for (int f : inst.facilities) {
      if (chosen.count(f) || breaches(f)) continue;
      int adv = advances(f);
      if (unmet && adv == 0) continue;
      if (best == -1 || adv > best_adv) {
        best = f;
        best_adv = adv;
      }
    }
    if (best == -1) return std::nullopt;  // stuck; not a proof of infeasibility
    chosen.insert(best);
    for (int g : member_groups[fidx[best]]) ++count[g];
  }
  for (int g = 0; g < t; ++g)
    if (count[g] < inst.lower[g]) return std::nullopt;
  return std::vector<int>(chosen.begin(), chosen.end());
}

}  // namespace cfrk
