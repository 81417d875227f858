#include <gtest/gtest.h>

#include <random>

#include "hcd/linkage.hpp"
#include "hcd/metrics.hpp"
#include "support.hpp"

namespace hcd {
namespace {

// Partition given as member lists of 1-based node ids.
Partition from_sets(std::size_t n, const std::vector<std::vector<std::size_t>>& sets) {
  std::vector<std::size_t> labels(n);
  for (std::size_t c = 0; c < sets.size(); ++c)
    for (const auto node : sets[c]) labels[node - 1] = c;
  return Partition(labels);
}

TEST(ClusteringLoss, Examples) {
  const Partition a({0, 0, 1, 1, 2});
  EXPECT_EQ(clustering_loss(a, a), 0u);
  EXPECT_EQ(clustering_loss(a, Partition({2, 2, 0, 0, 1})), 0u);
  EXPECT_EQ(clustering_loss(from_sets(6, {{1, 2, 3}, {4, 5, 6}}), from_sets(6, {{1, 2, 3, 4}, {5, 6}})), 2u);
  EXPECT_THROW(clustering_loss(a, Partition({0, 1})), ValidationError);
}

TEST(ClusteringLoss, PadsUnequalClusterCounts) {
  // Every node of a spurious or missing cluster counts as mis-clustered.
  EXPECT_EQ(clustering_loss(Partition({0, 0, 0, 0}), Partition({0, 0, 1, 1})), 4u);
  EXPECT_EQ(clustering_loss(Partition({0, 0, 1, 1}), Partition({0, 0, 0, 0})), 4u);
}

TEST(ClusteringLoss, MatchesBruteForce) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t k1 = 1 + rng() % 6, k2 = 1 + rng() % 6;
    std::vector<std::size_t> x(n), y(n);
    for (auto& v : x) v = rng() % k1;
    for (auto& v : y) v = rng() % k2;
    const Partition truth(x), pred(y);
    const auto k = std::max(truth.cluster_count(), pred.cluster_count());
    const auto expected = testing::brute_force_loss({truth.labels().begin(), truth.labels().end()},
                                                    {pred.labels().begin(), pred.labels().end()}, k);
    EXPECT_EQ(clustering_loss(truth, pred), expected);
    EXPECT_EQ(clustering_loss(pred, truth), expected);
  }
}

TEST(Assignment, SmallMatrices) {
  EXPECT_EQ(min_cost_assignment({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}}), (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_TRUE(min_cost_assignment({}).empty());
  EXPECT_THROW(min_cost_assignment({{1, 2}}), ValidationError);
}

TEST(Accuracy, PerfectAndCoarseningAbsorbsShuffles) {
  const auto tree = CommunityTree::full(2, 2);
  const auto truth = Partition::over_leaves(testing::block_labels({3, 3, 3, 3}), 4);
  for (std::size_t q = 1; q <= 2; ++q) EXPECT_EQ(accuracy_at_depth(truth, tree, truth, tree, q), 1.0);
  // Swapping sibling leaves is a relabelling at every depth.
  const auto shuffled = Partition::over_leaves({1, 1, 1, 0, 0, 0, 3, 3, 3, 2, 2, 2}, 4);
  EXPECT_EQ(accuracy_at_depth(truth, tree, shuffled, tree, 1), 1.0);
  EXPECT_EQ(accuracy_at_depth(truth, tree, shuffled, tree, 2), 1.0);
  // Errors confined inside a depth-1 super-community.
  auto moved = std::vector<std::size_t>(truth.labels().begin(), truth.labels().end());
  moved[0] = 1;
  moved[1] = 1;
  const auto inside = Partition::over_leaves(moved, 4);
  EXPECT_EQ(accuracy_at_depth(truth, tree, inside, tree, 1), 1.0);
  EXPECT_LT(accuracy_at_depth(truth, tree, inside, tree, 2), 1.0);
}

TEST(Accuracy, MovesAcrossRootSplit) {
  const auto tree = CommunityTree::full(2, 1);
  const std::size_t n = 40;
  const auto truth = Partition::over_leaves(testing::block_labels({20, 20}), 2);
  for (std::size_t m = 0; m <= 5; ++m) {
    auto labels = std::vector<std::size_t>(truth.labels().begin(), truth.labels().end());
    for (std::size_t i = 0; i < m; ++i) labels[i] = 1;
    const auto pred = Partition::over_leaves(labels, 2);
    const double expected =
        1.0 - static_cast<double>(testing::brute_force_loss({truth.labels().begin(), truth.labels().end()}, labels, 2)) / n;
    EXPECT_DOUBLE_EQ(accuracy_at_depth(truth, tree, pred, tree, 1), expected);
    EXPECT_DOUBLE_EQ(accuracy_at_depth(truth, tree, pred, tree, 1), 1.0 - 2.0 * static_cast<double>(m) / n);
  }
}

TEST(Accuracy, ShallowPredictedTreeIsClamped) {
  const auto deep = CommunityTree::full(2, 2);
  const auto shallow = CommunityTree::full(2, 1);
  const auto truth = Partition::over_leaves(testing::block_labels({2, 2, 2, 2}), 4);
  const auto pred = Partition::over_leaves(testing::block_labels({4, 4}), 2);
  EXPECT_EQ(accuracy_at_depth(truth, deep, pred, shallow, 1), 1.0);
  // Two merged pairs and two unmatched truth clusters: every node counts twice.
  EXPECT_EQ(accuracy_at_depth(truth, deep, pred, shallow, 2), 0.0);
}

TEST(TreeErrorRatio, ZeroForIdenticalTrees) {
  const auto tree = CommunityTree::full(2, 3);
  const auto labels = Partition::over_leaves(testing::block_labels({3, 1, 4, 1, 5, 9, 2, 6}), 8);
  EXPECT_EQ(tree_error_ratio(tree, tree, labels), 0.0);
}

TEST(TreeErrorRatio, StarVersusCaterpillar) {
  const auto star = CommunityTree::from_paths(
      {TreePath{}, TreePath::parse("0"), TreePath::parse("1"), TreePath::parse("2"), TreePath::parse("3")});
  const Dendrogram cat{Partition({0, 1, 2, 3}), {{0, 1, 0.5, 4}, {2, 4, 0.4, 5}, {3, 5, 0.1, 6}}};
  const auto caterpillar = tree_from_dendrogram(cat);
  const auto labels = Partition::over_leaves(testing::block_labels({2, 2, 2, 2}), 4);
  EXPECT_GT(tree_error_ratio(star, caterpillar.tree, labels, caterpillar.leaf_of_cluster), 0.0);
}

TEST(TreeErrorRatio, MatchesDenseMatrix) {
  std::mt19937_64 rng(14);
  const auto full = CommunityTree::full(2, 2);
  const Dendrogram cat{Partition({0, 1, 2, 3}), {{0, 1, 0.5, 4}, {2, 4, 0.4, 5}, {3, 5, 0.1, 6}}};
  const auto caterpillar = tree_from_dendrogram(cat);
  // One node per cluster, then random labellings up to N = 200.
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = trial == 0 ? 4 : 1 + rng() % 200;
    std::vector<std::size_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = trial == 0 ? i : rng() % 4;
    std::vector<std::size_t> mapped(n);
    for (std::size_t i = 0; i < n; ++i) mapped[i] = caterpillar.leaf_of_cluster[raw[i]];
    const auto s_truth = testing::similarity_matrix(full, raw);
    const auto s_pred = testing::similarity_matrix(caterpillar.tree, mapped);
    const double expected = (s_pred - s_truth).squaredNorm() / s_truth.squaredNorm();
    const auto labels = Partition::over_leaves(raw, 4);
    EXPECT_EQ(tree_error_ratio(full, caterpillar.tree, labels, caterpillar.leaf_of_cluster), expected);
  }
}

TEST(TreeErrorRatio, GeneralLabellingsMatchDenseMatrix) {
  std::mt19937_64 rng(15);
  const auto truth_tree = CommunityTree::full(2, 3);
  const auto pred_tree = CommunityTree::full(3, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<std::size_t> x(n), y(n);
    for (auto& v : x) v = rng() % 8;
    for (auto& v : y) v = rng() % 9;
    const auto s_truth = testing::similarity_matrix(truth_tree, x);
    const auto s_pred = testing::similarity_matrix(pred_tree, y);
    const double expected = (s_pred - s_truth).squaredNorm() / s_truth.squaredNorm();
    EXPECT_EQ(tree_error_ratio(truth_tree, Partition::over_leaves(x, 8), pred_tree, Partition::over_leaves(y, 9)),
              expected);
  }
}

TEST(Inversions, Examples) {
  const Dendrogram inverted{Partition({0, 1, 2}), {{0, 1, 0.2, 3}, {3, 2, 0.5, 4}}};
  EXPECT_EQ(count_inversions(inverted), 1u);
  const Dendrogram single{Partition({0, 1}), {{0, 1, 0.7, 2}}};
  EXPECT_EQ(count_inversions(single), 0u);
  const Dendrogram monotone{Partition({0, 1, 2}), {{0, 1, 0.5, 3}, {3, 2, 0.5, 4}}};
  EXPECT_EQ(count_inversions(monotone), 0u);
}

}  // namespace
}  // namespace hcd
