#pragma once

// Core data types: community trees, HSBM parameters, graphs, partitions and
// dendrograms. Everything here is immutable after construction.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hcd {

/// Raised when an input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position of a tree node: the child indices followed from the root.
/// The root is the empty path; depth is the path length.
class TreePath {
 public:
  TreePath() = default;
  explicit TreePath(std::vector<std::uint32_t> steps) : steps_(std::move(steps)) {}

  /// Parses "010" (one digit per step) or "0.1.12" (dot separated); "-" and
  /// "" are the root.
  static TreePath parse(const std::string& text);

  std::size_t depth() const { return steps_.size(); }
  bool is_root() const { return steps_.empty(); }
  std::span<const std::uint32_t> steps() const { return steps_; }
  std::uint32_t operator[](std::size_t i) const { return steps_[i]; }

  TreePath parent() const;
  TreePath child(std::uint32_t index) const;
  TreePath prefix(std::size_t length) const;
  bool is_prefix_of(const TreePath& other) const;

  /// "-" for the root; digits when every index is < 10, dots otherwise.
  std::string to_string() const;

  auto operator<=>(const TreePath&) const = default;
  bool operator==(const TreePath&) const = default;

 private:
  std::vector<std::uint32_t> steps_;
};

/// Longest common prefix of the two paths.
TreePath lca(const TreePath& u, const TreePath& v);

/// Rooted tree of communities. Nodes are stored in lexicographic path order
/// (root first), so leaf indices follow the lexicographic order of leaf paths.
class CommunityTree {
 public:
  /// A single root, which is also the only leaf.
  CommunityTree();

  /// Builds a tree from its node paths. Every non-root node's parent must be
  /// present; duplicates are rejected.
  static CommunityTree from_paths(std::vector<TreePath> paths);

  /// Full balanced tree in which every internal node has `arity` children.
  static CommunityTree full(std::uint32_t arity, std::size_t depth);

  std::size_t node_count() const { return paths_.size(); }
  std::size_t leaf_count() const { return leaves_.size(); }
  /// Maximum leaf depth.
  std::size_t depth() const { return depth_; }

  const TreePath& path(std::size_t node) const { return paths_[node]; }
  std::optional<std::size_t> parent(std::size_t node) const;
  std::span<const std::size_t> children(std::size_t node) const { return children_[node]; }
  bool is_leaf(std::size_t node) const { return children_[node].empty(); }

  /// Node indices of the leaves, lexicographic.
  std::span<const std::size_t> leaves() const { return leaves_; }
  std::size_t leaf_node(std::size_t leaf) const { return leaves_[leaf]; }
  /// Leaf index of a node, if it is a leaf.
  std::optional<std::size_t> leaf_index(std::size_t node) const;

  std::optional<std::size_t> find(const TreePath& path) const;
  /// Node index of the lowest common ancestor of two nodes.
  std::size_t lca_node(std::size_t u, std::size_t v) const;
  /// Depth of the lowest common ancestor of two leaves.
  std::size_t leaf_lca_depth(std::size_t leaf_a, std::size_t leaf_b) const;

  /// True when every internal node has exactly two children.
  bool is_binary() const;
  /// True when all leaves share the same depth and all internal nodes share
  /// the same arity.
  bool is_full_balanced() const;

  /// For each leaf, the index (into the returned node list) of its
  /// super-community at depth q: the ancestor at depth q, or the leaf itself
  /// when it is shallower than q. Valid for any q >= 0.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> depth_cut(std::size_t q) const;

  bool operator==(const CommunityTree& other) const { return paths_ == other.paths_; }

 private:
  struct Uninitialized {};
  explicit CommunityTree(Uninitialized) {}

  std::vector<TreePath> paths_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> leaves_;
  std::vector<std::optional<std::size_t>> leaf_of_node_;
  std::size_t depth_ = 0;
};

/// Tree, leaf prior and per-node link probability of a hierarchical SBM.
struct HsbmParams {
  CommunityTree tree;
  std::vector<double> pi;  ///< indexed by leaf
  std::vector<double> p;   ///< indexed by tree node

  /// p(lca(a, b)) for two leaves.
  double link_probability(std::size_t leaf_a, std::size_t leaf_b) const;
};

/// Lists every violated HsbmParams invariant; empty when the parameters are
/// valid. Non-flatness is an asymptotic condition and is not checked.
std::vector<std::string> validate_params(const HsbmParams& params);

struct Edge {
  std::size_t u;
  std::size_t v;
  auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph with CSR adjacency. Edges are stored with u < v,
/// sorted; duplicate input edges collapse to one.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::size_t> neighbors(std::size_t node) const {
    return {neighbors_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
  }
  std::size_t degree(std::size_t node) const { return offsets_[node + 1] - offsets_[node]; }
  bool has_edge(std::size_t u, std::size_t v) const;

  /// Subgraph induced by `nodes` (relabelled 0..|nodes|-1 in the given order).
  Graph induced_subgraph(std::span<const std::size_t> nodes) const;

  bool operator==(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> neighbors_;
};

/// Assignment of nodes to clusters 0..K-1.
class Partition {
 public:
  Partition() = default;
  /// Densely relabels the given ids, preserving their relative order, so
  /// every cluster id in 0..K-1 is used.
  explicit Partition(std::vector<std::size_t> labels);

  /// Keeps ids as given with cluster count k; clusters may be empty. Used for
  /// labellings indexed by tree leaves.
  static Partition over_leaves(std::vector<std::size_t> labels, std::size_t k);

  std::size_t size() const { return labels_.size(); }
  std::size_t cluster_count() const { return k_; }
  std::size_t operator[](std::size_t node) const { return labels_[node]; }
  std::span<const std::size_t> labels() const { return labels_; }
  std::vector<std::size_t> cluster_sizes() const;
  std::vector<std::vector<std::size_t>> members() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t k_ = 0;
};

/// Merge of two clusters. Ids below K are initial clusters; merge i creates
/// cluster K + i.
struct Merge {
  std::size_t left;
  std::size_t right;
  double similarity;
  std::size_t new_id;
  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  Partition initial_clusters;
  std::vector<Merge> merges;

  std::size_t cluster_count() const { return initial_clusters.cluster_count(); }
};

/// Throws ValidationError unless the merges form a single binary tree over
/// the initial clusters.
void check_dendrogram(const Dendrogram& dendrogram);

/// Super-communities at depth q, as a partition of the nodes. `leaf_labels`
/// assigns every node a leaf index of `tree`. Requires 1 <= q <= depth.
Partition super_communities(const CommunityTree& tree, const Partition& leaf_labels, std::size_t q);

/// Same as super_communities but accepts any q >= 0, applying the rule that
/// leaves shallower than q persist.
Partition super_communities_clamped(const CommunityTree& tree, const Partition& leaf_labels,
                                    std::size_t q);

}  // namespace hcd
