#ifndef CFRK_METRIC_SPACE_HPP
#define CFRK_METRIC_SPACE_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "cfrk/rational.hpp"

namespace cfrk {

enum class MetricKind { dense, graph, tree };

struct WeightedEdge {
  int u = 0;
  int v = 0;
  Rational weight;
};

// Edge of a rooted tree, oriented parent -> child.
struct TreeEdge {
  int parent = 0;
  int child = 0;
  Rational weight;
};

// Finite metric over named points. Three input forms: an explicit distance
// matrix, a connected weighted graph (closed to its shortest-path metric), or
// a rooted weighted tree. Distances are exact rationals; instances of the
// clustering problem reference points by index into this space. Immutable
// after construction, safe to share across threads.
class MetricSpace {
 public:
  static MetricSpace from_matrix(std::vector<std::string> names,
                                 std::vector<std::vector<Rational>> dist);
  static MetricSpace from_graph(std::vector<std::string> names,
                                std::vector<WeightedEdge> edges);
  static MetricSpace from_tree(std::vector<std::string> names, int root,
                               std::vector<TreeEdge> edges);

  MetricKind kind() const { return kind_; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index_of(std::string_view name) const;

  const Rational& dist(int u, int v) const { return dist_[u * size() + v]; }

  // max over min of nonzero pairwise distances; throws on < 2 points or an
  // all-zero metric.
  Rational aspect_ratio() const;
  Rational max_distance() const;
  Rational min_nonzero_distance() const;

  // Tree-form access; only valid when kind() == tree.
  int tree_root() const { return root_; }
  const std::vector<TreeEdge>& tree_edges() const { return tree_edges_; }

  // Graph-form access; only valid when kind() == graph.
  const std::vector<WeightedEdge>& graph_edges() const { return graph_edges_; }

 private:
  MetricKind kind_ = MetricKind::dense;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Rational> dist_;  // row-major size*size
  int root_ = -1;
  std::vector<TreeEdge> tree_edges_;
  std::vector<WeightedEdge> graph_edges_;

  void build_index_();
};

// Shortest-path closure of a connected nonnegative-weight graph. Throws
// std::invalid_argument naming the components when the graph is disconnected.
MetricSpace close_graph(std::vector<std::string> names,
                        const std::vector<WeightedEdge>& edges);

// Triples (u,v,w) with d(u,w) > d(u,v) + d(v,w) + tol. Symmetry violations
// are reported as (u,v,u), nonzero diagonal as (u,u,u). Dense form only.
std::vector<std::array<int, 3>> verify_metric(const MetricSpace& m,
                                              const Rational& tol = Rational(0));

}  // namespace cfrk

#endif  // CFRK_METRIC_SPACE_HPP
