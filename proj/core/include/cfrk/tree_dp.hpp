#ifndef CFRK_TREE_DP_HPP
#define CFRK_TREE_DP_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "cfrk/instance.hpp"

namespace cfrk {

// Rooted full binary tree with every client and facility at a leaf. The top
// node is a pseudo-root whose single child edge has length zero; dummy nodes
// and zero-length edges preserve all pairwise distances exactly.
struct BinarizedTree {
  struct Node {
    int parent = -1;
    Rational up_len;          // edge to parent
    int left = -1;
    int right = -1;
    int client = -1;          // index into Instance::clients, leaves only
    int facility = -1;        // index into Instance::facilities, leaves only
    int metric_node = -1;     // original metric node, -1 for dummies
  };
  std::vector<Node> nodes;
  int pseudo_root = -1;

  // Sum of edge lengths on the tree path between two nodes.
  Rational path_length(int a, int b) const;
  std::optional<int> leaf_of_client(int client_index) const;
  std::optional<int> leaf_of_facility(int facility_index) const;
};

// Requires the instance metric to be the tree form.
BinarizedTree binarize(const Instance& inst);

struct TreeDpOptions {
  bool at_most_k = false;        // default: open exactly k facilities
  std::ostream* dump = nullptr;  // optional table dump, tab-separated
};

// Exact solver for the median objective on tree metrics: bottom-up table
// over (edge, per-group open counts, total opened, routed flow). For the
// means objective the table is filled on plain distances and the opened set
// is re-assigned under squared distances afterwards; exactness is only
// claimed for median. Returns nullopt when no center set satisfies the
// fair-range bounds and capacities.
std::optional<Solution> dp_solve(const BinarizedTree& bt, const Instance& inst,
                                 const TreeDpOptions& opts = {});

}  // namespace cfrk

#endif  // CFRK_TREE_DP_HPP
