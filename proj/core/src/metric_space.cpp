#include "cfrk/metric_space.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace cfrk {

namespace {

void check_names_unique(const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second)
      throw std::invalid_argument("MetricSpace: duplicate point name '" + n + "'");
  }
}

}  // namespace

void MetricSpace::build_index_() {
  index_.clear();
  for (int i = 0; i < size(); ++i) index_[names_[i]] = i;
}

std::optional<int> MetricSpace::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

MetricSpace MetricSpace::from_matrix(std::vector<std::string> names,
                                     std::vector<std::vector<Rational>> dist) {
  check_names_unique(names);
  const size_t n = names.size();
  if (dist.size() != n)
    throw std::invalid_argument("MetricSpace: matrix row count != point count");
  MetricSpace m;
  m.kind_ = MetricKind::dense;
  m.names_ = std::move(names);
  m.dist_.resize(n * n);
  for (size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n)
      throw std::invalid_argument("MetricSpace: matrix is not square");
    for (size_t j = 0; j < n; ++j) m.dist_[i * n + j] = dist[i][j];
  }
  m.build_index_();
  return m;
}

namespace {

// Dijkstra from every source. Edges are nonnegative so reduced costs are not
// needed; Rational keys compare exactly.
std::vector<Rational> all_pairs_shortest(
    int n, const std::vector<std::vector<std::pair<int, Rational>>>& adj,
    const std::vector<std::string>& names) {
  std::vector<Rational> dist(static_cast<size_t>(n) * n);
  std::vector<char> done(n);
  std::vector<std::optional<Rational>> d(n);
  for (int s = 0; s < n; ++s) {
    std::fill(done.begin(), done.end(), 0);
    std::fill(d.begin(), d.end(), std::nullopt);
    d[s] = Rational(0);
    for (int iter = 0; iter < n; ++iter) {
      int best = -1;
      for (int v = 0; v < n; ++v)
        if (!done[v] && d[v] && (best == -1 || *d[v] < *d[best])) best = v;
      if (best == -1) break;
      done[best] = 1;
      for (const auto& [to, w] : adj[best]) {
        Rational cand = *d[best] + w;
        if (!d[to] || cand < *d[to]) d[to] = cand;
      }
    }
    for (int v = 0; v < n; ++v) {
      if (!d[v]) {
        std::string comp_a = names[s], comp_b = names[v];
        throw std::invalid_argument(
            "close_graph: graph is disconnected; no path between component of '" +
            comp_a + "' and component of '" + comp_b + "'");
      }
      dist[static_cast<size_t>(s) * n + v] = *d[v];
    }
  }
  return dist;
}

std::vector<std::vector<std::pair<int, Rational>>> adjacency(
    int n, const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<std::pair<int, Rational>>> adj(n);
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("MetricSpace: edge endpoint out of range");
    if (e.weight.is_negative())
      throw std::invalid_argument("MetricSpace: negative edge weight");
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  return adj;
}

}  // namespace

MetricSpace close_graph(std::vector<std::string> names,
                        const std::vector<WeightedEdge>& edges) {
  check_names_unique(names);
  const int n = static_cast<int>(names.size());
  auto adj = adjacency(n, edges);
  std::vector<Rational> dist = all_pairs_shortest(n, adj, names);
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = dist[static_cast<size_t>(i) * n + j];
  return MetricSpace::from_matrix(std::move(names), std::move(rows));
}

MetricSpace MetricSpace::from_graph(std::vector<std::string> names,
                                    std::vector<WeightedEdge> edges) {
  MetricSpace closed = close_graph(names, edges);
  MetricSpace m;
  m.kind_ = MetricKind::graph;
  m.names_ = closed.names_;
  m.dist_ = closed.dist_;
  m.graph_edges_ = std::move(edges);
  m.build_index_();
  return m;
}

MetricSpace MetricSpace::from_tree(std::vector<std::string> names, int root,
                                   std::vector<TreeEdge> edges) {
  check_names_unique(names);
  const int n = static_cast<int>(names.size());
  if (root < 0 || root >= n)
    throw std::invalid_argument("MetricSpace: tree root out of range");
  if (static_cast<int>(edges.size()) != n - 1)
    throw std::invalid_argument("MetricSpace: a tree on n nodes needs n-1 edges");
  std::vector<int> parent(n, -2);
  parent[root] = -1;
  std::vector<WeightedEdge> undirected;
  undirected.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.parent < 0 || e.parent >= n || e.child < 0 || e.child >= n)
      throw std::invalid_argument("MetricSpace: tree edge endpoint out of range");
    if (e.weight.is_negative())
      throw std::invalid_argument("MetricSpace: negative tree edge weight");
    if (parent[e.child] != -2)
      throw std::invalid_argument("MetricSpace: node '" + names[e.child] +
                                  "' has two parents (or is the root)");
    parent[e.child] = e.parent;
    undirected.push_back({e.parent, e.child, e.weight});
  }
  for (int v = 0; v < n; ++v)
    if (parent[v] == -2)
      throw std::invalid_argument("MetricSpace: tree node '" + names[v] +
                                  "' unreachable from root");
  auto adj = adjacency(n, undirected);
  std::vector<Rational> dist = all_pairs_shortest(n, adj, names);

  MetricSpace m;
  m.kind_ = MetricKind::tree;
  m.names_ = std::move(names);
  m.dist_ = std::move(dist);
  m.root_ = root;
  m.tree_edges_ = std::move(edges);
  m.build_index_();
  return m;
}

Rational MetricSpace::max_distance() const {
  if (size() < 2) throw std::domain_error("MetricSpace: need >= 2 points");
  Rational best(0);
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) best = Rational::max(best, dist(i, j));
  return best;
}

Rational MetricSpace::min_nonzero_distance() const {
  if (size() < 2) throw std::domain_error("MetricSpace: need >= 2 points");
  std::optional<Rational> best;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) {
      const Rational& d = dist(i, j);
      if (!d.is_zero() && (!best || d < *best)) best = d;
    }
  if (!best) throw std::domain_error("MetricSpace: all pairwise distances are zero");
  return *best;
}

Rational MetricSpace::aspect_ratio() const {
  return max_distance() / min_nonzero_distance();
}

std::vector<std::array<int, 3>> verify_metric(const MetricSpace& m,
                                              const Rational& tol) {
  std::vector<std::array<int, 3>> bad;
  const int n = m.size();
  for (int u = 0; u < n; ++u) {
    if (!m.dist(u, u).is_zero()) bad.push_back({u, u, u});
    for (int v = u + 1; v < n; ++v)
      if (m.dist(u, v) != m.dist(v, u)) bad.push_back({u, v, u});
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      for (int w = 0; w < n; ++w) {
        if (w == u || w == v) continue;
        if (m.dist(u, w) > m.dist(u, v) + m.dist(v, w) + tol)
          bad.push_back({u, v, w});
      }
    }
  return bad;
}

}  // namespace cfrk
