#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hcd/linkage.hpp"
#include "hcd/spectral.hpp"

namespace hcd {

namespace {

struct NegativeSpectrum {
  CommunityEstimate estimate;
  EigenPairs pairs;  ///< the `estimate.count` smallest eigenpairs of H(r_c)
};

double critical_r(const Graph& graph) {
  double sum = 0.0, squares = 0.0;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto d = static_cast<double>(graph.degree(i));
    sum += d;
    squares += d * d;
  }
  return std::sqrt(std::max(squares / sum - 1.0, 0.0));
}

std::size_t count_negative(const std::vector<double>& values, double tolerance) {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [tolerance](double v) { return v < -tolerance; }));
}

EigenPairs truncate(EigenPairs pairs, std::size_t k) {
  pairs.values.resize(k);
  pairs.vectors = pairs.vectors.leftCols(static_cast<Eigen::Index>(k)).eval();
  return pairs;
}

// Smallest eigenpairs of H(r_c) until the first non-negative eigenvalue. The
// iterative path doubles the requested count while every returned
// eigenvalue is negative.
NegativeSpectrum negative_spectrum(const Graph& graph, const EigenOptions& options) {
  const auto n = graph.node_count();
  if (graph.edge_count() == 0) return {{n, 0.0, true}, {}};
  const double r = critical_r(graph);
  const auto h = bethe_hessian(graph, r);
  const double tolerance = 1e-10 * h.norm_bound();

  EigenPairs pairs;
  std::size_t negative = 0;
  if (n <= options.dense_threshold) {
    pairs = symmetric_eigs(h, n, SpectrumEnd::smallest, options);
    negative = count_negative(pairs.values, tolerance);
  } else {
    for (std::size_t k = std::min<std::size_t>(8, n);; k = std::min(2 * k, n)) {
      pairs = symmetric_eigs(h, k, SpectrumEnd::smallest, options);
      negative = count_negative(pairs.values, tolerance);
      if (negative < k || k == n) break;
    }
  }
  const auto count = std::max<std::size_t>(negative, 1);
  return {{count, r, false}, truncate(std::move(pairs), count)};
}

std::vector<std::vector<std::size_t>> connected_components(const Graph& graph) {
  const auto n = graph.node_count();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> component{start};
    seen[start] = true;
    for (std::size_t head = 0; head < component.size(); ++head)
      for (const auto next : graph.neighbors(component[head]))
        if (!seen[next]) {
          seen[next] = true;
          component.push_back(next);
        }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

}  // namespace

CommunityEstimate estimate_num_communities(const Graph& graph, const EigenOptions& options) {
  return negative_spectrum(graph, options).estimate;
}

Partition flat_cluster_bethe_hessian(const Graph& graph, std::uint64_t seed, const EigenOptions& options) {
  const auto n = graph.node_count();
  if (n == 0) return Partition{};
  const auto spectrum = negative_spectrum(graph, options);
  if (spectrum.estimate.degenerate) {
    std::vector<std::size_t> singletons(n);
    std::iota(singletons.begin(), singletons.end(), std::size_t{0});
    return Partition(std::move(singletons));
  }
  const auto k = spectrum.estimate.count;
  if (k == 1) return Partition(std::vector<std::size_t>(n, 0));

  const auto& embedding = spectrum.pairs.vectors;
  std::vector<Eigen::Index> active;
  for (std::size_t i = 0; i < n; ++i)
    if (graph.degree(i) > 0) active.push_back(static_cast<Eigen::Index>(i));
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(active.size()), embedding.cols());
  for (std::size_t i = 0; i < active.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = embedding.row(active[i]);

  const auto fit = kmeans(rows, std::min(k, active.size()), seed);
  std::vector<std::size_t> labels(n, 0);
  for (std::size_t i = 0; i < active.size(); ++i) labels[static_cast<std::size_t>(active[i])] = fit.clusters[i];
  for (std::size_t i = 0; i < n; ++i) {
    if (graph.degree(i) > 0) continue;
    Eigen::Index nearest = 0;
    (fit.centroids.rowwise() - embedding.row(static_cast<Eigen::Index>(i))).rowwise().squaredNorm().minCoeff(&nearest);
    labels[i] = static_cast<std::size_t>(nearest);
  }
  return Partition(std::move(labels));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> fiedler_bipartition(const Graph& graph,
                                                                                  const EigenOptions& options) {
  const auto n = graph.node_count();
  if (n < 2) throw ValidationError("bipartition needs at least two nodes");
  std::vector<std::size_t> first, second;

  auto components = connected_components(graph);
  if (components.size() > 1) {
    std::stable_sort(components.begin(), components.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    for (auto& component : components) {
      auto& side = first.size() <= second.size() ? first : second;
      side.insert(side.end(), component.begin(), component.end());
    }
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    return {first, second};
  }

  const auto pairs = symmetric_eigs(adjacency_matrix(graph), 2, SpectrumEnd::largest, options);
  const auto v = pairs.vectors.col(0);
  for (std::size_t i = 0; i < n; ++i) (v(static_cast<Eigen::Index>(i)) >= 0.0 ? first : second).push_back(i);
  if (first.empty() || second.empty()) {
    Eigen::Index smallest = 0;
    v.minCoeff(&smallest);
    auto& full = first.empty() ? second : first;
    auto& empty = first.empty() ? first : second;
    full.erase(std::find(full.begin(), full.end(), static_cast<std::size_t>(smallest)));
    empty.push_back(static_cast<std::size_t>(smallest));
  }
  return {first, second};
}

TopDownResult top_down_hcd(const Graph& graph, std::size_t min_size, const EigenOptions& options) {
  const auto n = graph.node_count();
  if (n == 0) throw ValidationError("top-down HCD needs a non-empty graph");

  struct Part {
    std::vector<std::size_t> nodes;
    TreePath path;
  };
  std::vector<TreePath> paths;
  std::vector<Part> leaves;
  std::vector<Part> stack;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  stack.push_back({std::move(all), TreePath{}});

  while (!stack.empty()) {
    auto part = std::move(stack.back());
    stack.pop_back();
    if (part.path.depth() > n) throw std::logic_error("top-down recursion deeper than the node count");
    paths.push_back(part.path);

    bool split = part.nodes.size() >= std::max<std::size_t>(min_size, 2);
    Graph sub;
    if (split) {
      sub = graph.induced_subgraph(part.nodes);
      const auto estimate = estimate_num_communities(sub, options);
      split = !estimate.degenerate && estimate.count > 1;
    }
    if (!split) {
      leaves.push_back(std::move(part));
      continue;
    }
    auto [left, right] = fiedler_bipartition(sub, options);
    for (auto& local : left) local = part.nodes[local];
    for (auto& local : right) local = part.nodes[local];
    stack.push_back({std::move(right), part.path.child(1)});
    stack.push_back({std::move(left), part.path.child(0)});
  }

  auto tree = CommunityTree::from_paths(std::move(paths));
  std::vector<std::size_t> labels(n, 0);
  for (const auto& leaf : leaves) {
    const auto index = *tree.leaf_index(*tree.find(leaf.path));
    for (const auto node : leaf.nodes) labels[node] = index;
  }
  auto leaf_labels = Partition::over_leaves(std::move(labels), tree.leaf_count());
  auto dendrogram = dendrogram_from_tree(graph, tree, leaf_labels);
  return {std::move(leaf_labels), std::move(tree), std::move(dendrogram)};
}

}  // namespace hcd
