#pragma once

// Bottom-up hierarchical community detection: edge densities between node
// sets and the average-linkage merge loop over an initial flat clustering.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hcd/model.hpp"

namespace hcd {

/// Edge density w(a, b) / (|a| |b|) between two disjoint non-empty node sets.
double edge_density(const Graph& graph, std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Exact density as an (edges, pairs) ratio.
struct Density {
  std::uint64_t edges = 0;
  std::uint64_t pairs = 0;

  double value() const { return pairs == 0 ? 0.0 : static_cast<double>(edges) / static_cast<double>(pairs); }
  /// Exact three-way comparison by cross-multiplication; empty ratios are 0.
  friend std::strong_ordering operator<=>(const Density& x, const Density& y);
  friend bool operator==(const Density& x, const Density& y) { return (x <=> y) == 0; }
};

/// K x K matrix of edge counts between clusters; the diagonal holds internal
/// edge counts.
std::vector<std::vector<std::uint64_t>> cluster_edge_counts(const Graph& graph, const Partition& clusters);

enum class LinkageMode {
  assortative,     ///< merge the densest pair
  disassortative,  ///< merge the sparsest pair
};

/// Average linkage on edge densities. Merges the pair of current clusters
/// with extreme density (ties: lexicographically smallest (min id, max id));
/// the merged cluster's density to any other cluster is the size-weighted
/// mean of its parts', kept as exact integer edge and pair counts. The
/// recorded similarity is the density at merge time.
Dendrogram average_linkage(const Graph& graph, const Partition& initial,
                           LinkageMode mode = LinkageMode::assortative);

using FlatClusterer = std::function<Partition(const Graph&)>;

struct BottomUpResult {
  Partition clusters;
  Dendrogram dendrogram;
};

/// Flat clustering followed by average linkage over its clusters.
BottomUpResult bottom_up_hcd(const Graph& graph, const FlatClusterer& flat,
                             LinkageMode mode = LinkageMode::assortative);

/// Binary tree read off a dendrogram.
struct DendrogramTree {
  CommunityTree tree;
  std::vector<std::size_t> leaf_of_cluster;  ///< initial cluster id -> leaf index
  std::vector<std::size_t> node_of_cluster;  ///< any cluster id (initial or merged) -> tree node
};

/// Root = final merge; children ordered by descending number of contained
/// initial clusters, then by smallest contained cluster id (child 0 first).
DendrogramTree tree_from_dendrogram(const Dendrogram& dendrogram);

/// Node partition obtained by applying only the first K - k merges, i.e. the
/// dendrogram cut into k clusters (k clamped to [1, K]).
Partition cut_dendrogram(const Dendrogram& dendrogram, std::size_t k);

/// Relabels a cluster partition into leaf indices of a dendrogram tree.
Partition to_leaf_labels(const Partition& clusters, const DendrogramTree& tree);

/// Dendrogram whose merges follow the internal nodes of a binary tree (deepest
/// first), each with the edge density between its two children as
/// similarity. `leaf_labels` assigns nodes to leaves of `tree`.
Dendrogram dendrogram_from_tree(const Graph& graph, const CommunityTree& tree, const Partition& leaf_labels);

/// Empirical p(u) for each tree node: internal density for leaves, density
/// across distinct child subtrees for internal nodes.
std::vector<double> empirical_link_probabilities(const Graph& graph, const CommunityTree& tree,
                                                 const Partition& leaf_labels);

}  // namespace hcd
