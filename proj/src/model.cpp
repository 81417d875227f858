#include "hcd/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace hcd {

TreePath TreePath::parse(const std::string& text) {
  if (text.empty() || text == "-") return {};
  std::vector<std::uint32_t> steps;
  if (text.find('.') != std::string::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = std::min(text.find('.', start), text.size());
      const auto token = text.substr(start, end - start);
      if (token.empty() || !std::all_of(token.begin(), token.end(), ::isdigit))
        throw ValidationError("malformed tree path '" + text + "'");
      steps.push_back(static_cast<std::uint32_t>(std::stoul(token)));
      start = end + 1;
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw ValidationError("malformed tree path '" + text + "'");
      steps.push_back(static_cast<std::uint32_t>(c - '0'));
    }
  }
  return TreePath(std::move(steps));
}

TreePath TreePath::parent() const {
  if (is_root()) throw ValidationError("root has no parent");
  return prefix(depth() - 1);
}

TreePath TreePath::child(std::uint32_t index) const {
  auto steps = steps_;
  steps.push_back(index);
  return TreePath(std::move(steps));
}

TreePath TreePath::prefix(std::size_t length) const {
  length = std::min(length, steps_.size());
  return TreePath({steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(length)});
}

bool TreePath::is_prefix_of(const TreePath& other) const {
  return steps_.size() <= other.steps_.size() &&
         std::equal(steps_.begin(), steps_.end(), other.steps_.begin());
}

std::string TreePath::to_string() const {
  if (is_root()) return "-";
  const bool digits = std::all_of(steps_.begin(), steps_.end(), [](auto s) { return s < 10; });
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!digits && i > 0) out += '.';
    out += std::to_string(steps_[i]);
  }
  return out;
}

TreePath lca(const TreePath& u, const TreePath& v) {
  const auto a = u.steps();
  const auto b = v.steps();
  const auto mismatch = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return u.prefix(static_cast<std::size_t>(mismatch.first - a.begin()));
}

// ---------------------------------------------------------------------------

CommunityTree::CommunityTree() : CommunityTree(from_paths({TreePath{}})) {}

CommunityTree CommunityTree::from_paths(std::vector<TreePath> paths) {
  std::sort(paths.begin(), paths.end());
  if (std::adjacent_find(paths.begin(), paths.end()) != paths.end())
    throw ValidationError("duplicate tree node");
  if (paths.empty() || !paths.front().is_root()) throw ValidationError("tree has no root");

  CommunityTree tree{Uninitialized{}};
  tree.paths_ = std::move(paths);
  const auto n = tree.paths_.size();
  tree.parent_.assign(n, std::nullopt);
  tree.children_.assign(n, {});
  std::map<TreePath, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(tree.paths_[i], i);
  for (std::size_t i = 1; i < n; ++i) {
    const auto it = index.find(tree.paths_[i].parent());
    if (it == index.end())
      throw ValidationError("tree node " + tree.paths_[i].to_string() + " has no parent");
    tree.parent_[i] = it->second;
    tree.children_[it->second].push_back(i);
  }
  tree.leaf_of_node_.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    if (tree.children_[i].empty()) {
      tree.leaf_of_node_[i] = tree.leaves_.size();
      tree.leaves_.push_back(i);
      tree.depth_ = std::max(tree.depth_, tree.paths_[i].depth());
    }
  }
  return tree;
}

CommunityTree CommunityTree::full(std::uint32_t arity, std::size_t depth) {
  if (arity < 1) throw ValidationError("tree arity must be >= 1");
  std::vector<TreePath> paths{TreePath{}};
  std::vector<TreePath> frontier{TreePath{}};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<TreePath> next;
    for (const auto& node : frontier)
      for (std::uint32_t c = 0; c < arity; ++c) next.push_back(node.child(c));
    paths.insert(paths.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return from_paths(std::move(paths));
}

std::optional<std::size_t> CommunityTree::parent(std::size_t node) const { return parent_[node]; }

std::optional<std::size_t> CommunityTree::leaf_index(std::size_t node) const {
  return leaf_of_node_[node];
}

std::optional<std::size_t> CommunityTree::find(const TreePath& path) const {
  const auto it = std::lower_bound(paths_.begin(), paths_.end(), path);
  if (it == paths_.end() || *it != path) return std::nullopt;
  return static_cast<std::size_t>(it - paths_.begin());
}

std::size_t CommunityTree::lca_node(std::size_t u, std::size_t v) const {
  return *find(lca(paths_[u], paths_[v]));
}

std::size_t CommunityTree::leaf_lca_depth(std::size_t leaf_a, std::size_t leaf_b) const {
  return lca(paths_[leaves_[leaf_a]], paths_[leaves_[leaf_b]]).depth();
}

bool CommunityTree::is_binary() const {
  return std::all_of(children_.begin(), children_.end(),
                     [](const auto& c) { return c.empty() || c.size() == 2; });
}

bool CommunityTree::is_full_balanced() const {
  std::optional<std::size_t> arity;
  for (std::size_t i = 0; i < node_count(); ++i) {
    if (children_[i].empty()) {
      if (paths_[i].depth() != depth_) return false;
    } else {
      if (arity && *arity != children_[i].size()) return false;
      arity = children_[i].size();
    }
  }
  return true;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> CommunityTree::depth_cut(
    std::size_t q) const {
  std::vector<std::size_t> cut;
  std::vector<std::size_t> of_leaf(leaf_count());
  for (std::size_t i = 0; i < node_count(); ++i) {
    const auto d = paths_[i].depth();
    if (d == q || (d < q && is_leaf(i))) cut.push_back(i);
  }
  for (std::size_t leaf = 0; leaf < leaf_count(); ++leaf) {
    const auto& path = paths_[leaves_[leaf]];
    const auto anchor = *find(path.prefix(q));
    of_leaf[leaf] = static_cast<std::size_t>(std::lower_bound(cut.begin(), cut.end(), anchor) -
                                             cut.begin());
  }
  return {std::move(cut), std::move(of_leaf)};
}

// ---------------------------------------------------------------------------

double HsbmParams::link_probability(std::size_t leaf_a, std::size_t leaf_b) const {
  return p[tree.lca_node(tree.leaf_node(leaf_a), tree.leaf_node(leaf_b))];
}

std::vector<std::string> validate_params(const HsbmParams& params) {
  std::vector<std::string> violations;
  const auto& tree = params.tree;
  if (params.pi.size() != tree.leaf_count()) {
    violations.push_back("pi has " + std::to_string(params.pi.size()) + " entries for " +
                         std::to_string(tree.leaf_count()) + " leaves");
  } else {
    double total = 0.0;
    for (std::size_t a = 0; a < params.pi.size(); ++a) {
      const double v = params.pi[a];
      if (!(v > 0.0 && v <= 1.0))
        violations.push_back("pi out of (0,1] at leaf " + tree.path(tree.leaf_node(a)).to_string());
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12)
      violations.push_back("pi sums to " + std::to_string(total) + ", not 1");
  }
  if (params.p.size() != tree.node_count()) {
    violations.push_back("p has " + std::to_string(params.p.size()) + " entries for " +
                         std::to_string(tree.node_count()) + " tree nodes");
    return violations;
  }
  for (std::size_t u = 0; u < tree.node_count(); ++u) {
    const double v = params.p[u];
    if (!(v >= 0.0 && v <= 1.0))
      violations.push_back("p out of [0,1] at node " + tree.path(u).to_string());
    if (const auto parent = tree.parent(u); parent && !(params.p[*parent] < v))
      violations.push_back("assortativity violated at node " + tree.path(u).to_string());
  }
  return violations;
}

// ---------------------------------------------------------------------------

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) throw ValidationError("edge endpoint out of range");
    if (e.u == e.v) throw ValidationError("self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  neighbors_.resize(2 * edges_.size());
  auto cursor = offsets_;
  for (const auto& e : edges_) {
    neighbors_[cursor[e.u]++] = e.v;
    neighbors_[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::induced_subgraph(std::span<const std::size_t> nodes) const {
  constexpr auto absent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local(n_, absent);
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
  std::vector<Edge> sub;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (const auto j : neighbors(nodes[i]))
      if (local[j] != absent && local[j] > i) sub.push_back({i, local[j]});
  return Graph(nodes.size(), std::move(sub));
}

// ---------------------------------------------------------------------------

Partition::Partition(std::vector<std::size_t> labels) : labels_(std::move(labels)) {
  auto ids = labels_;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  k_ = ids.size();
  if (!ids.empty() && ids.back() + 1 != ids.size()) {
    for (auto& l : labels_)
      l = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), l) - ids.begin());
  }
}

Partition Partition::over_leaves(std::vector<std::size_t> labels, std::size_t k) {
  for (const auto l : labels)
    if (l >= k) throw ValidationError("label " + std::to_string(l) + " >= cluster count");
  Partition p;
  p.labels_ = std::move(labels);
  p.k_ = k;
  return p;
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (const auto l : labels_) ++sizes[l];
  return sizes;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(k_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

// ---------------------------------------------------------------------------

void check_dendrogram(const Dendrogram& dendrogram) {
  const auto k = dendrogram.cluster_count();
  if (k == 0) {
    if (!dendrogram.merges.empty()) throw ValidationError("merges without clusters");
    return;
  }
  if (dendrogram.merges.size() != k - 1)
    throw ValidationError("dendrogram over " + std::to_string(k) + " clusters has " +
                          std::to_string(dendrogram.merges.size()) + " merges");
  std::vector<bool> used(2 * k - 1, false);
  for (std::size_t i = 0; i < dendrogram.merges.size(); ++i) {
    const auto& m = dendrogram.merges[i];
    if (m.new_id != k + i) throw ValidationError("merge " + std::to_string(i) + " has bad new_id");
    for (const auto child : {m.left, m.right}) {
      if (child >= k + i) throw ValidationError("merge references a future cluster");
      if (used[child]) throw ValidationError("cluster used twice as a merge child");
      used[child] = true;
    }
    if (m.left == m.right) throw ValidationError("merge of a cluster with itself");
  }
}

Partition super_communities_clamped(const CommunityTree& tree, const Partition& leaf_labels,
                                    std::size_t q) {
  if (leaf_labels.cluster_count() > tree.leaf_count())
    throw ValidationError("labels reference more clusters than the tree has leaves");
  const auto [cut, of_leaf] = tree.depth_cut(q);
  std::vector<std::size_t> labels(leaf_labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = of_leaf[leaf_labels[i]];
  return Partition::over_leaves(std::move(labels), cut.size());
}

Partition super_communities(const CommunityTree& tree, const Partition& leaf_labels, std::size_t q) {
  if (q < 1 || q > tree.depth())
    throw ValidationError("depth q=" + std::to_string(q) + " outside [1, " +
                          std::to_string(tree.depth()) + "]");
  return super_communities_clamped(tree, leaf_labels, q);
}

}  // namespace hcd
