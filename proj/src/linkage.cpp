#include "hcd/linkage.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

namespace hcd {

std::strong_ordering operator<=>(const Density& x, const Density& y) {
  using wide = unsigned __int128;
  const wide xe = x.pairs == 0 ? 0 : x.edges, xp = x.pairs == 0 ? 1 : x.pairs;
  const wide ye = y.pairs == 0 ? 0 : y.edges, yp = y.pairs == 0 ? 1 : y.pairs;
  return xe * yp <=> ye * xp;
}

double edge_density(const Graph& graph, std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.empty() || b.empty()) throw ValidationError("edge density needs non-empty node sets");
  std::vector<char> side(graph.node_count(), 0);
  for (const auto i : a) side[i] = 1;
  for (const auto j : b) {
    if (side[j] == 1) throw ValidationError("edge density needs disjoint node sets");
    side[j] = 2;
  }
  std::uint64_t w = 0;
  for (const auto i : a)
    for (const auto j : graph.neighbors(i)) w += side[j] == 2;
  return static_cast<double>(w) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::vector<std::vector<std::uint64_t>> cluster_edge_counts(const Graph& graph, const Partition& clusters) {
  if (clusters.size() != graph.node_count()) throw ValidationError("partition size does not match the graph");
  const auto k = clusters.cluster_count();
  std::vector<std::vector<std::uint64_t>> w(k, std::vector<std::uint64_t>(k, 0));
  for (const auto& e : graph.edges()) {
    const auto a = clusters[e.u];
    const auto b = clusters[e.v];
    ++w[a][b];
    if (a != b) ++w[b][a];
  }
  return w;
}

namespace {

struct Candidate {
  Density density;
  std::size_t lo;
  std::size_t hi;
};

}  // namespace

Dendrogram average_linkage(const Graph& graph, const Partition& initial, LinkageMode mode) {
  const auto k = initial.cluster_count();
  Dendrogram dendrogram{initial, {}};
  if (k <= 1) return dendrogram;

  const auto counts = cluster_edge_counts(graph, initial);
  const auto total = 2 * k - 1;
  std::vector<std::uint64_t> size(total, 0);
  const auto initial_sizes = initial.cluster_sizes();
  std::copy(initial_sizes.begin(), initial_sizes.end(), size.begin());
  std::vector<bool> alive(total, false);
  std::fill(alive.begin(), alive.begin() + static_cast<std::ptrdiff_t>(k), true);

  // Edge counts between live clusters; row m is filled when cluster m is born.
  std::vector<std::vector<std::uint64_t>> w(total, std::vector<std::uint64_t>(total, 0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) w[a][b] = counts[a][b];

  // Max-heap on density (min-heap in disassortative mode); ties go to the
  // lexicographically smallest (lo, hi).
  const auto worse = [mode](const Candidate& x, const Candidate& y) {
    const auto order = x.density <=> y.density;
    if (order != 0) return mode == LinkageMode::assortative ? order < 0 : order > 0;
    return std::tie(x.lo, x.hi) > std::tie(y.lo, y.hi);
  };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> heap(worse);
  const auto push = [&](std::size_t x, std::size_t y) {
    heap.push({Density{w[x][y], size[x] * size[y]}, std::min(x, y), std::max(x, y)});
  };
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) push(a, b);

  for (std::size_t step = 0; step + 1 < k; ++step) {
    Candidate best;
    do {
      best = heap.top();
      heap.pop();
    } while (!alive[best.lo] || !alive[best.hi]);

    const auto m = k + step;
    alive[best.lo] = alive[best.hi] = false;
    size[m] = size[best.lo] + size[best.hi];
    for (std::size_t c = 0; c < m; ++c) {
      if (!alive[c]) continue;
      w[m][c] = w[c][m] = w[best.lo][c] + w[best.hi][c];
    }
    alive[m] = true;
    for (std::size_t c = 0; c < m; ++c)
      if (alive[c]) push(c, m);
    dendrogram.merges.push_back({best.lo, best.hi, best.density.value(), m});
  }
  return dendrogram;
}

BottomUpResult bottom_up_hcd(const Graph& graph, const FlatClusterer& flat, LinkageMode mode) {
  if (graph.node_count() == 0) throw ValidationError("bottom-up HCD needs a non-empty graph");
  auto clusters = flat(graph);
  auto dendrogram = average_linkage(graph, clusters, mode);
  return {std::move(clusters), std::move(dendrogram)};
}

DendrogramTree tree_from_dendrogram(const Dendrogram& dendrogram) {
  check_dendrogram(dendrogram);
  const auto k = dendrogram.cluster_count();
  if (k == 0) throw ValidationError("empty dendrogram");
  const auto total = 2 * k - 1;
  std::vector<std::size_t> leaves_in(total, 1);
  std::vector<std::size_t> min_id(total);
  std::iota(min_id.begin(), min_id.begin() + static_cast<std::ptrdiff_t>(k), std::size_t{0});
  std::vector<std::array<std::size_t, 2>> kids(total);
  for (const auto& m : dendrogram.merges) {
    leaves_in[m.new_id] = leaves_in[m.left] + leaves_in[m.right];
    min_id[m.new_id] = std::min(min_id[m.left], min_id[m.right]);
    auto first = m.left, second = m.right;
    if (std::tie(leaves_in[second], min_id[first]) > std::tie(leaves_in[first], min_id[second]))
      std::swap(first, second);
    kids[m.new_id] = {first, second};
  }

  std::vector<TreePath> cluster_path(total);
  std::vector<TreePath> paths;
  std::vector<std::size_t> stack{total - 1};
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    paths.push_back(cluster_path[c]);
    if (c >= k) {
      for (std::uint32_t side = 0; side < 2; ++side) {
        cluster_path[kids[c][side]] = cluster_path[c].child(side);
        stack.push_back(kids[c][side]);
      }
    }
  }
  DendrogramTree out{CommunityTree::from_paths(std::move(paths)), std::vector<std::size_t>(k),
                     std::vector<std::size_t>(total)};
  for (std::size_t c = 0; c < total; ++c) {
    out.node_of_cluster[c] = *out.tree.find(cluster_path[c]);
    if (c < k) out.leaf_of_cluster[c] = *out.tree.leaf_index(out.node_of_cluster[c]);
  }
  return out;
}

Partition cut_dendrogram(const Dendrogram& dendrogram, std::size_t k) {
  check_dendrogram(dendrogram);
  const auto initial = dendrogram.cluster_count();
  k = std::clamp<std::size_t>(k, 1, std::max<std::size_t>(initial, 1));
  std::vector<std::size_t> owner(2 * initial, 0);
  std::iota(owner.begin(), owner.end(), std::size_t{0});
  for (std::size_t i = 0; i + k < initial; ++i) {
    const auto& m = dendrogram.merges[i];
    owner[m.left] = owner[m.right] = m.new_id;
  }
  // Follow each initial cluster to the newest merged cluster containing it.
  for (std::size_t c = 2 * initial; c-- > 0;)
    if (owner[c] != c) owner[c] = owner[owner[c]];
  std::vector<std::size_t> labels(dendrogram.initial_clusters.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = owner[dendrogram.initial_clusters[i]];
  return Partition(std::move(labels));
}

Partition to_leaf_labels(const Partition& clusters, const DendrogramTree& tree) {
  if (clusters.cluster_count() != tree.leaf_of_cluster.size())
    throw ValidationError("partition and dendrogram tree disagree on the cluster count");
  std::vector<std::size_t> labels(clusters.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = tree.leaf_of_cluster[clusters[i]];
  return Partition::over_leaves(std::move(labels), tree.tree.leaf_count());
}

namespace {

// Leaves (as leaf indices) under every node.
std::vector<std::vector<std::size_t>> leaves_below(const CommunityTree& tree) {
  std::vector<std::vector<std::size_t>> below(tree.node_count());
  for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    std::optional<std::size_t> node = tree.leaf_node(leaf);
    while (node) {
      below[*node].push_back(leaf);
      node = tree.parent(*node);
    }
  }
  return below;
}

}  // namespace

Dendrogram dendrogram_from_tree(const Graph& graph, const CommunityTree& tree, const Partition& leaf_labels) {
  if (!tree.is_binary()) throw ValidationError("dendrogram_from_tree needs a binary tree");
  const auto k = tree.leaf_count();
  const auto labels = Partition::over_leaves({leaf_labels.labels().begin(), leaf_labels.labels().end()}, k);
  const auto counts = cluster_edge_counts(graph, labels);
  const auto sizes = labels.cluster_sizes();
  const auto below = leaves_below(tree);

  std::vector<std::size_t> internal;
  for (std::size_t u = 0; u < tree.node_count(); ++u)
    if (!tree.is_leaf(u)) internal.push_back(u);
  std::stable_sort(internal.begin(), internal.end(),
                   [&](auto x, auto y) { return tree.path(x).depth() > tree.path(y).depth(); });

  Dendrogram dendrogram{labels, {}};
  std::vector<std::size_t> cluster_of_node(tree.node_count());
  for (std::size_t leaf = 0; leaf < k; ++leaf) cluster_of_node[tree.leaf_node(leaf)] = leaf;
  for (const auto u : internal) {
    const auto left = tree.children(u)[0];
    const auto right = tree.children(u)[1];
    Density density;
    for (const auto a : below[left])
      for (const auto b : below[right]) {
        density.edges += counts[a][b];
        density.pairs += static_cast<std::uint64_t>(sizes[a]) * sizes[b];
      }
    const auto id = k + dendrogram.merges.size();
    auto lo = cluster_of_node[left], hi = cluster_of_node[right];
    if (lo > hi) std::swap(lo, hi);
    dendrogram.merges.push_back({lo, hi, density.value(), id});
    cluster_of_node[u] = id;
  }
  return dendrogram;
}

std::vector<double> empirical_link_probabilities(const Graph& graph, const CommunityTree& tree,
                                                 const Partition& leaf_labels) {
  const auto k = tree.leaf_count();
  const auto labels = Partition::over_leaves({leaf_labels.labels().begin(), leaf_labels.labels().end()}, k);
  const auto counts = cluster_edge_counts(graph, labels);
  const auto sizes = labels.cluster_sizes();
  const auto below = leaves_below(tree);
  std::vector<double> p(tree.node_count(), 0.0);
  for (std::size_t u = 0; u < tree.node_count(); ++u) {
    Density density;
    if (tree.is_leaf(u)) {
      const auto a = *tree.leaf_index(u);
      density = {counts[a][a], static_cast<std::uint64_t>(sizes[a]) * (sizes[a] - (sizes[a] > 0)) / 2};
    } else {
      const auto kids = tree.children(u);
      for (std::size_t x = 0; x < kids.size(); ++x)
        for (std::size_t y = x + 1; y < kids.size(); ++y)
          for (const auto a : below[kids[x]])
            for (const auto b : below[kids[y]]) {
              density.edges += counts[a][b];
              density.pairs += static_cast<std::uint64_t>(sizes[a]) * sizes[b];
            }
    }
    p[u] = density.value();
  }
  return p;
}

}  // namespace hcd
