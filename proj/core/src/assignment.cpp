#include "cfrk/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cfrk {

namespace {

struct Arc {
  int to;
  long long cap;
  Rational cost;
  int rev;  // index of the reverse arc in graph[to]
};

class FlowGraph {
 public:
  explicit FlowGraph(int n) : adj_(n) {}

  void add_arc(int from, int to, long long cap, const Rational& cost) {
    adj_[from].push_back({to, cap, cost, static_cast<int>(adj_[to].size())});
    adj_[to].push_back({from, 0, -cost, static_cast<int>(adj_[from].size()) - 1});
  }

  // Successive shortest paths with Dijkstra on reduced costs. All original
  // costs are nonnegative, so zero initial potentials are valid.
  std::optional<Rational> min_cost_flow(int s, int t, long long flow_target) {
    const int n = static_cast<int>(adj_.size());
    std::vector<Rational> potential(n, Rational(0));
    Rational total_cost(0);
    long long flow = 0;
    while (flow < flow_target) {
      std::vector<std::optional<Rational>> dist(n);
      std::vector<int> prev_node(n, -1), prev_arc(n, -1);
      std::vector<char> done(n, 0);
      dist[s] = Rational(0);
      for (;;) {
        int u = -1;
        for (int v = 0; v < n; ++v)
          if (!done[v] && dist[v] && (u == -1 || *dist[v] < *dist[u])) u = v;
        if (u == -1) break;
        done[u] = 1;
        for (size_t i = 0; i < adj_[u].size(); ++i) {
          const Arc& a = adj_[u][i];
          if (a.cap <= 0) continue;
          Rational nd = *dist[u] + a.cost + potential[u] - potential[a.to];
          if (!dist[a.to] || nd < *dist[a.to]) {
            dist[a.to] = nd;
            prev_node[a.to] = u;
            prev_arc[a.to] = static_cast<int>(i);
          }
        }
      }
      if (!dist[t]) return std::nullopt;  // no augmenting path left
      for (int v = 0; v < n; ++v)
        if (dist[v]) potential[v] += *dist[v];
      long long push = flow_target - flow;
      for (int v = t; v != s; v = prev_node[v])
        push = std::min(push, adj_[prev_node[v]][prev_arc[v]].cap);
      for (int v = t; v != s; v = prev_node[v]) {
        Arc& a = adj_[prev_node[v]][prev_arc[v]];
        a.cap -= push;
        adj_[v][a.rev].cap += push;
        total_cost += Rational(push) * a.cost;
      }
      flow += push;
    }
    return total_cost;
  }

  const std::vector<Arc>& arcs_from(int v) const { return adj_[v]; }

 private:
  std::vector<std::vector<Arc>> adj_;
};

// Common denominator for the supplies, capped; returns (scale, rounded).
std::pair<long long, bool> weight_scale(const std::vector<Rational>& supplies) {
  long long scale = 1;
  bool rounded = false;
  for (const auto& w : supplies) {
    long long g = std::gcd(scale, w.den());
    __int128 next = static_cast<__int128>(scale) / g * w.den();
    if (next > kWeightScaleCap) {
      scale = kWeightScaleCap;
      rounded = true;
      break;
    }
    scale = static_cast<long long>(next);
  }
  return {scale, rounded};
}

long long scaled_amount(const Rational& w, long long scale, bool rounded) {
  if (!rounded) return (w * Rational(scale)).num();  // exact integer
  Rational x = w * Rational(scale);
  long long floor = x.num() >= 0 ? x.num() / x.den() : 0;
  Rational frac = x - Rational(floor);
  return frac >= Rational(1, 2) ? floor + 1 : floor;
}

}  // namespace

std::optional<Solution> solve_transportation(const TransportationProblem& tp) {
  if (!tp.metric) throw std::invalid_argument("solve_transportation: no metric");
  if (tp.clients.size() != tp.supplies.size() ||
      tp.centers.size() != tp.capacities.size())
    throw std::invalid_argument("solve_transportation: length mismatch");
  const int nc = static_cast<int>(tp.clients.size());
  const int nf = static_cast<int>(tp.centers.size());

  auto [scale, rounded] = weight_scale(tp.supplies);
  std::vector<long long> supply(nc);
  long long supply_total = 0;
  for (int i = 0; i < nc; ++i) {
    if (tp.supplies[i].is_negative())
      throw std::invalid_argument("solve_transportation: negative supply");
    supply[i] = scaled_amount(tp.supplies[i], scale, rounded);
    supply_total += supply[i];
  }
  __int128 cap_total = 0;
  for (long long c : tp.capacities) {
    if (c < 0) throw std::invalid_argument("solve_transportation: negative capacity");
    cap_total += static_cast<__int128>(c) * scale;
  }
  if (cap_total < supply_total) return std::nullopt;

  // source = 0, clients = 1..nc, centers = nc+1..nc+nf, sink = nc+nf+1
  const int source = 0, sink = nc + nf + 1;
  FlowGraph g(nc + nf + 2);
  for (int i = 0; i < nc; ++i) g.add_arc(source, 1 + i, supply[i], Rational(0));
  for (int j = 0; j < nf; ++j) {
    // No center ever receives more than the total supply.
    __int128 cap = static_cast<__int128>(tp.capacities[j]) * scale;
    if (cap > supply_total) cap = supply_total;
    g.add_arc(1 + nc + j, sink, static_cast<long long>(cap), Rational(0));
  }
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nf; ++j) {
      const Rational& d = tp.metric->dist(tp.clients[i], tp.centers[j]);
      Rational cost = tp.objective == Objective::means ? d * d : d;
      g.add_arc(1 + i, 1 + nc + j, supply[i], cost);
    }

  auto scaled_cost = g.min_cost_flow(source, sink, supply_total);
  if (!scaled_cost) return std::nullopt;

  Solution sol;
  sol.centers.assign(tp.centers.begin(), tp.centers.end());
  std::sort(sol.centers.begin(), sol.centers.end());
  sol.weight_scale = scale;
  sol.weights_rounded = rounded;
  for (int i = 0; i < nc; ++i) {
    for (const Arc& a : g.arcs_from(1 + i)) {
      if (a.to < 1 + nc || a.to >= 1 + nc + nf) continue;
      long long sent = supply[i] - a.cap;  // forward arc residual
      if (sent > 0)
        sol.assignment.push_back(
            {tp.clients[i], tp.centers[a.to - 1 - nc], Rational(sent, scale)});
    }
  }
  sol.cost = *scaled_cost / Rational(scale);
  return sol;
}

std::optional<Solution> optimal_assignment(const Instance& inst,
                                           const std::vector<int>& centers) {
  TransportationProblem tp;
  tp.metric = inst.metric.get();
  tp.objective = inst.objective;
  tp.clients = inst.clients;
  tp.supplies.reserve(inst.clients.size());
  for (int c : inst.clients) tp.supplies.push_back(inst.weight_of(c));
  tp.centers = centers;
  std::sort(tp.centers.begin(), tp.centers.end());
  tp.centers.erase(std::unique(tp.centers.begin(), tp.centers.end()),
                   tp.centers.end());
  tp.capacities.reserve(tp.centers.size());
  for (int f : tp.centers) tp.capacities.push_back(inst.capacity_of(f));
  return solve_transportation(tp);
}

}  // namespace cfrk
