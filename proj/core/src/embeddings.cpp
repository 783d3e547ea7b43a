#include "cfrk/embeddings.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "cfrk/generators.hpp"

namespace cfrk {

Rational kmedian_cost(const Instance& inst, const std::vector<int>& centers) {
  Rational total(0);
  for (int c : inst.clients) {
    Rational best = inst.dist(c, centers.front());
    for (size_t i = 1; i < centers.size(); ++i)
      best = Rational::min(best, inst.dist(c, centers[i]));
    total += inst.weight_of(c) * best;
  }
  return total;
}

namespace {

// All q-subsets of [0, n) passed to fn as index vectors.
template <typename Fn>
void for_each_subset(int n, int q, Fn&& fn) {
  std::vector<int> idx(q);
  for (int i = 0; i < q; ++i) idx[i] = i;
  if (q > n) return;
  for (;;) {
    fn(idx);
    int i = q - 1;
    while (i >= 0 && idx[i] == n - q + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<int> kmedian_baseline(const Instance& inst, int swap_size) {
  if (swap_size < 1) throw std::invalid_argument("kmedian_baseline: swap_size >= 1");
  if (inst.k > static_cast<int>(inst.facilities.size()))
    throw std::invalid_argument("kmedian_baseline: k exceeds facility count");
  std::vector<int> sorted_fac = inst.facilities;
  std::sort(sorted_fac.begin(), sorted_fac.end());

  // Deterministic start: the k facilities with the cheapest singleton cost.
  std::vector<std::pair<Rational, int>> singles;
  for (int f : sorted_fac) singles.emplace_back(kmedian_cost(inst, {f}), f);
  std::stable_sort(singles.begin(), singles.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> current;
  for (int i = 0; i < inst.k; ++i) current.push_back(singles[i].second);
  std::sort(current.begin(), current.end());
  Rational cost = kmedian_cost(inst, current);

  const long long iter_cap =
      10LL * std::max(1, inst.metric->size()) * std::max(1, inst.k);
  for (long long iter = 0; iter < iter_cap; ++iter) {
    std::vector<int> best_set;
    Rational best_cost = cost;
    std::set<int> in_set(current.begin(), current.end());
    std::vector<int> outside;
    for (int f : sorted_fac)
      if (!in_set.count(f)) outside.push_back(f);
    for (int q = 1; q <= std::min<int>(swap_size, inst.k); ++q) {
      for_each_subset(static_cast<int>(current.size()), q, [&](const std::vector<int>& out_idx) {
        for_each_subset(static_cast<int>(outside.size()), q, [&](const std::vector<int>& in_idx) {
          std::vector<int> cand = current;
          for (int j = 0; j < q; ++j) cand[out_idx[j]] = outside[in_idx[j]];
          Rational c = kmedian_cost(inst, cand);
          if (c < best_cost) {
            best_cost = c;
            best_set = cand;
          }
        });
      });
    }
    if (best_set.empty()) break;  // p-swap local optimum
    current = best_set;
    std::sort(current.begin(), current.end());
    cost = best_cost;
  }
  return current;
}

std::pair<Instance, CliqueStarMetric> clique_star_embed(
    const Instance& inst, const std::vector<int>& baseline) {
  if (baseline.empty()) throw std::invalid_argument("clique_star_embed: empty baseline");
  if (static_cast<int>(baseline.size()) > inst.k)
    throw std::invalid_argument("clique_star_embed: baseline larger than k");
  const MetricSpace& d = *inst.metric;
  const int n = d.size();

  CliqueStarMetric csm;
  csm.hubs = baseline;
  std::sort(csm.hubs.begin(), csm.hubs.end());
  csm.hubs.erase(std::unique(csm.hubs.begin(), csm.hubs.end()), csm.hubs.end());
  csm.hub_of.resize(n);
  csm.pendant_len.resize(n);
  std::set<int> hub_set(csm.hubs.begin(), csm.hubs.end());
  for (int u = 0; u < n; ++u) {
    if (hub_set.count(u)) {
      csm.hub_of[u] = u;
      csm.pendant_len[u] = Rational(0);
      continue;
    }
    int best = csm.hubs.front();
    for (int h : csm.hubs)
      if (d.dist(u, h) < d.dist(u, best)) best = h;  // ties: smallest hub id
    csm.hub_of[u] = best;
    csm.pendant_len[u] = d.dist(u, best);
  }

  // d'(u,v) = pendant(u) + d(hub_u, hub_v) + pendant(v); shortcuts through a
  // third hub cannot help because the clique keeps original distances.
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      rows[u][v] =
          csm.pendant_len[u] + d.dist(csm.hub_of[u], csm.hub_of[v]) + csm.pendant_len[v];
    }
  csm.derived = std::make_shared<MetricSpace>(
      MetricSpace::from_matrix(d.names(), std::move(rows)));
  return {inst.with_metric(csm.derived), csm};
}

namespace {

struct FrtNode {
  int parent = -1;       // index into the node vector
  Rational up_len;       // edge to parent
  int point = -1;        // input-point index for singleton leaves
  int level = 0;
};

// Hierarchical decomposition: random permutation plus a random radius scale
// beta in [1,2) with 1/64 granularity keeps every distance rational. Level-i
// balls have radius beta * 2^(i-1) * dmin; the edge from a level-i node to
// its level-(i+1) parent weighs 2^(i+1) * dmin, which makes the leaf metric
// dominate the input metric for every seed. Co-located points share a site
// and hang off the site leaf on zero-weight edges.
std::vector<FrtNode> frt_decompose(const std::vector<int>& points,
                                   const MetricSpace& d, std::uint64_t seed,
                                   int* out_root) {
  const int m = static_cast<int>(points.size());
  std::vector<FrtNode> nodes;
  if (m == 1) {
    nodes.push_back({-1, Rational(0), 0, 0});
    *out_root = 0;
    return nodes;
  }

  std::vector<int> reps;              // point indices, one per site
  std::vector<int> site_of(m, -1);
  for (int i = 0; i < m; ++i) {
    for (size_t s = 0; s < reps.size(); ++s)
      if (d.dist(points[i], points[reps[s]]).is_zero()) {
        site_of[i] = static_cast<int>(s);
        break;
      }
    if (site_of[i] == -1) {
      site_of[i] = static_cast<int>(reps.size());
      reps.push_back(i);
    }
  }
  const int ms = static_cast<int>(reps.size());

  auto attach_members = [&](const std::vector<int>& site_leaf) {
    for (int i = 0; i < m; ++i)
      if (reps[site_of[i]] != i)
        nodes.push_back({site_leaf[site_of[i]], Rational(0), i, 0});
  };

  if (ms == 1) {
    // Everything coincides; a zero-weight star is an exact embedding.
    nodes.push_back({-1, Rational(0), reps[0], 1});
    *out_root = 0;
    attach_members({0});
    return nodes;
  }

  Rational dmin, dmax(0);
  bool have_min = false;
  for (int i = 0; i < ms; ++i)
    for (int j = i + 1; j < ms; ++j) {
      const Rational& x = d.dist(points[reps[i]], points[reps[j]]);
      dmax = Rational::max(dmax, x);
      if (!have_min || x < dmin) {
        dmin = x;
        have_min = true;
      }
    }

  int levels = 1;
  while (Rational(1LL << levels) * dmin < dmax) {
    ++levels;
    if (levels > 60) throw std::overflow_error("frt_tree_embed: aspect ratio too large");
  }

  std::mt19937_64 rng(seed);
  Rational beta(64 + rand_range(rng, 0, 63), 64);
  std::vector<int> perm(ms);
  for (int i = 0; i < ms; ++i) perm[i] = i;
  for (int i = ms - 1; i > 0; --i)
    std::swap(perm[i], perm[rand_range(rng, 0, i)]);

  // clusters per level as site-index lists; top level holds everything.
  std::vector<std::vector<int>> cur = {std::vector<int>(ms)};
  for (int i = 0; i < ms; ++i) cur[0][i] = i;
  std::vector<int> cur_node(1);
  nodes.push_back({-1, Rational(0), -1, levels});
  *out_root = 0;
  cur_node[0] = 0;
  std::vector<int> site_leaf(ms, -1);

  for (int level = levels - 1; level >= 0; --level) {
    Rational radius = beta * dmin * Rational(1LL << level, 2);
    Rational up = Rational(1LL << (level + 1)) * dmin;
    std::vector<std::vector<int>> next;
    std::vector<int> next_node;
    for (size_t ci = 0; ci < cur.size(); ++ci) {
      // Split by the first permutation center within the level radius.
      std::vector<std::vector<int>> parts;
      std::vector<int> owner;  // permutation position owning each part
      for (int s : cur[ci]) {
        int pos = -1;
        for (int q = 0; q < ms; ++q)
          if (d.dist(points[reps[s]], points[reps[perm[q]]]) <= radius) {
            pos = q;
            break;
          }
        size_t slot = 0;
        for (; slot < owner.size(); ++slot)
          if (owner[slot] == pos) break;
        if (slot == owner.size()) {
          owner.push_back(pos);
          parts.emplace_back();
        }
        parts[slot].push_back(s);
      }
      for (auto& part : parts) {
        int idx = static_cast<int>(nodes.size());
        bool singleton_leaf = level == 0;
        if (singleton_leaf && part.size() != 1)
          throw std::logic_error("frt_tree_embed: level-0 cluster not singleton");
        nodes.push_back({cur_node[ci], up,
                         singleton_leaf ? reps[part.front()] : -1, level});
        if (singleton_leaf) site_leaf[part.front()] = idx;
        next.push_back(std::move(part));
        next_node.push_back(idx);
      }
    }
    cur = std::move(next);
    cur_node = std::move(next_node);
  }
  attach_members(site_leaf);
  return nodes;
}

}  // namespace

EmbeddedTree frt_tree_embed(const std::vector<int>& points,
                            const MetricSpace& dists, std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("frt_tree_embed: no points");
  int root = 0;
  std::vector<FrtNode> nodes = frt_decompose(points, dists, seed, &root);

  std::vector<std::string> names(nodes.size());
  EmbeddedTree out;
  out.seed = seed;
  out.leaf_of_point.assign(points.size(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].point >= 0) {
      names[i] = dists.name(points[nodes[i].point]);
      out.leaf_of_point[nodes[i].point] = static_cast<int>(i);
    } else {
      names[i] = "_t" + std::to_string(nodes[i].level) + "_" + std::to_string(i);
    }
  }
  std::vector<TreeEdge> edges;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].parent >= 0)
      edges.push_back({nodes[i].parent, static_cast<int>(i), nodes[i].up_len});
  out.tree = std::make_shared<MetricSpace>(
      MetricSpace::from_tree(std::move(names), root, std::move(edges)));
  return out;
}

Instance clique_star_to_tree(const Instance& star_instance,
                             const CliqueStarMetric& csm, std::uint64_t seed) {
  const MetricSpace& base = *star_instance.metric;
  const int n = base.size();
  int root_local = 0;
  std::vector<FrtNode> frt = frt_decompose(csm.hubs, base, seed, &root_local);

  // Original nodes keep their indices; decomposition internals follow.
  std::vector<std::string> names = base.names();
  std::vector<int> frt_to_node(frt.size(), -1);
  for (size_t i = 0; i < frt.size(); ++i) {
    if (frt[i].point >= 0) {
      frt_to_node[i] = csm.hubs[frt[i].point];
    } else {
      frt_to_node[i] = static_cast<int>(names.size());
      names.push_back("_t" + std::to_string(frt[i].level) + "_" + std::to_string(i));
    }
  }
  std::vector<TreeEdge> edges;
  for (size_t i = 0; i < frt.size(); ++i)
    if (frt[i].parent >= 0)
      edges.push_back({frt_to_node[frt[i].parent], frt_to_node[i], frt[i].up_len});
  for (int u = 0; u < n; ++u)
    if (csm.hub_of[u] != u) edges.push_back({csm.hub_of[u], u, csm.pendant_len[u]});

  auto tree = std::make_shared<MetricSpace>(MetricSpace::from_tree(
      std::move(names), frt_to_node[root_local], std::move(edges)));
  return star_instance.with_metric(std::move(tree));
}

}  // namespace cfrk
