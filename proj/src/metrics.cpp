#include "hcd/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace hcd {

std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<std::int64_t>>& cost) {
  // Shortest augmenting paths with row/column potentials, 1-based with a
  // virtual column 0.
  const auto n = cost.size();
  for (const auto& row : cost)
    if (row.size() != n) throw ValidationError("assignment cost matrix must be square");
  constexpr auto inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), slack(n + 1);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t col = 0;
    std::fill(slack.begin(), slack.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col] = true;
      const auto row = row_of[col];
      std::int64_t delta = inf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const auto reduced = cost[row - 1][j - 1] - u[row] - v[j];
        if (reduced < slack[j]) {
          slack[j] = reduced;
          way[j] = col;
        }
        if (slack[j] < delta) {
          delta = slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          slack[j] -= delta;
        }
      }
      col = next;
    } while (row_of[col] != 0);
    do {
      const auto prev = way[col];
      row_of[col] = row_of[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[row_of[j] - 1] = j - 1;
  return assignment;
}

std::uint64_t clustering_loss(const Partition& truth, const Partition& pred) {
  if (truth.size() != pred.size()) throw ValidationError("partitions cover different node counts");
  const auto k = std::max(truth.cluster_count(), pred.cluster_count());
  if (k == 0) return 0;
  std::vector<std::vector<std::int64_t>> overlap(k, std::vector<std::int64_t>(k, 0));
  std::vector<std::int64_t> truth_size(k, 0), pred_size(k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++overlap[truth[i]][pred[i]];
    ++truth_size[truth[i]];
    ++pred_size[pred[i]];
  }
  std::vector<std::vector<std::int64_t>> cost(k, std::vector<std::int64_t>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) cost[a][b] = truth_size[a] + pred_size[b] - 2 * overlap[a][b];
  const auto assignment = min_cost_assignment(cost);
  std::uint64_t loss = 0;
  for (std::size_t a = 0; a < k; ++a) loss += static_cast<std::uint64_t>(cost[a][assignment[a]]);
  return loss;
}

double accuracy_at_depth(const Partition& truth_labels, const CommunityTree& truth_tree, const Partition& pred_labels,
                         const CommunityTree& pred_tree, std::size_t q) {
  if (truth_labels.size() != pred_labels.size()) throw ValidationError("partitions cover different node counts");
  if (truth_labels.size() == 0) return 1.0;
  const auto truth = super_communities_clamped(truth_tree, truth_labels, q);
  const auto pred = super_communities_clamped(pred_tree, pred_labels, q);
  return 1.0 - static_cast<double>(clustering_loss(truth, pred)) / static_cast<double>(truth_labels.size());
}

double tree_error_ratio(const CommunityTree& truth_tree, const Partition& truth_labels,
                        const CommunityTree& pred_tree, const Partition& pred_labels) {
  if (truth_labels.size() != pred_labels.size()) throw ValidationError("labellings cover different node counts");
  if (truth_labels.cluster_count() > truth_tree.leaf_count() || pred_labels.cluster_count() > pred_tree.leaf_count())
    throw ValidationError("labels reference leaves missing from the tree");

  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  for (std::size_t i = 0; i < truth_labels.size(); ++i) cells[{truth_labels[i], pred_labels[i]}] += 1.0;
  const std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> cell_list(cells.begin(), cells.end());

  double error = 0.0, reference = 0.0;
  for (const auto& [x, mx] : cell_list)
    for (const auto& [y, my] : cell_list) {
      const auto truth_depth = static_cast<double>(truth_tree.leaf_lca_depth(x.first, y.first));
      const auto pred_depth = static_cast<double>(pred_tree.leaf_lca_depth(x.second, y.second));
      const double weight = mx * my;
      error += weight * (pred_depth - truth_depth) * (pred_depth - truth_depth);
      reference += weight * truth_depth * truth_depth;
    }
  if (reference == 0.0) return error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return error / reference;
}

double tree_error_ratio(const CommunityTree& truth_tree, const CommunityTree& pred_tree, const Partition& labels,
                        std::span<const std::size_t> pred_leaf_of) {
  if (pred_leaf_of.empty()) return tree_error_ratio(truth_tree, labels, pred_tree, labels);
  if (pred_leaf_of.size() < labels.cluster_count()) throw ValidationError("leaf map misses some labels");
  std::vector<std::size_t> mapped(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) mapped[i] = pred_leaf_of[labels[i]];
  return tree_error_ratio(truth_tree, labels, pred_tree, Partition::over_leaves(std::move(mapped), pred_tree.leaf_count()));
}

std::size_t count_inversions(const Dendrogram& dendrogram) {
  check_dendrogram(dendrogram);
  const auto k = dendrogram.cluster_count();
  std::size_t inversions = 0;
  for (const auto& merge : dendrogram.merges) {
    bool inverted = false;
    for (const auto child : {merge.left, merge.right})
      if (child >= k && merge.similarity > dendrogram.merges[child - k].similarity) inverted = true;
    inversions += inverted;
  }
  return inversions;
}

}  // namespace hcd
