#pragma once

// Independent reference implementations used as test oracles.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "hcd/model.hpp"

namespace hcd::testing {

/// Disjoint cliques of the given sizes, nodes numbered clique by clique.
inline Graph cliques(const std::vector<std::size_t>& sizes) {
  std::vector<Edge> edges;
  std::size_t offset = 0;
  for (const auto size : sizes) {
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j) edges.push_back({offset + i, offset + j});
    offset += size;
  }
  return Graph(offset, std::move(edges));
}

/// Labels 0,..,0,1,..,1,... for consecutive blocks of the given sizes.
inline std::vector<std::size_t> block_labels(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> labels;
  for (std::size_t b = 0; b < sizes.size(); ++b) labels.insert(labels.end(), sizes[b], b);
  return labels;
}

/// Erdos-Renyi graph G(n, p).
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

/// Minimum over all bijections between the (padded) cluster sets of the
/// summed symmetric differences, by enumerating permutations.
inline std::uint64_t brute_force_loss(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& pred,
                                      std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::uint64_t best = UINT64_MAX;
  do {
    std::uint64_t loss = 0;
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < truth.size(); ++i) loss += (truth[i] == c) != (pred[i] == perm[c]);
    best = std::min(best, loss);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Explicit N x N tree similarity matrix: depth of the lca of the leaves of
/// every node pair, from the leaf paths.
inline Eigen::MatrixXd similarity_matrix(const CommunityTree& tree, const std::vector<std::size_t>& leaf_of_node) {
  const auto n = static_cast<Eigen::Index>(leaf_of_node.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& a = tree.path(tree.leaf_node(leaf_of_node[static_cast<std::size_t>(i)])).steps();
      const auto& b = tree.path(tree.leaf_node(leaf_of_node[static_cast<std::size_t>(j)])).steps();
      std::size_t common = 0;
      while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
      s(i, j) = static_cast<double>(common);
    }
  return s;
}

/// Dense adjacency matrix.
inline Eigen::MatrixXd dense_adjacency(const Graph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph.edges()) {
    a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
    a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
  }
  return a;
}

/// Number of negative eigenvalues of the dense Bethe-Hessian at
/// r = sqrt(sum d^2 / sum d - 1), from a full dense decomposition.
inline std::size_t dense_negative_count(const Graph& graph) {
  const Eigen::MatrixXd a = dense_adjacency(graph);
  const Eigen::VectorXd d = a.rowwise().sum();
  const double r = std::sqrt(d.squaredNorm() / d.sum() - 1.0);
  const auto n = a.rows();
  Eigen::MatrixXd h = (r * r - 1.0) * Eigen::MatrixXd::Identity(n, n) - r * a;
  h.diagonal() += d;
  const Eigen::VectorXd values = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
  return static_cast<std::size_t>((values.array() < -1e-9).count());
}

}  // namespace hcd::testing
