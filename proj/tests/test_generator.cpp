#include <gtest/gtest.h>

#include <cmath>

#include "hcd/generator.hpp"
#include "hcd/theory.hpp"
#include "support.hpp"

namespace hcd {
namespace {

TEST(Generator, ExtremeProbabilities) {
  // A single-community tree has no parent-child pair, so constant p is valid.
  const HsbmParams complete{CommunityTree(), {1.0}, {1.0}};
  EXPECT_EQ(sample_hsbm(complete, 30, 1).graph.edge_count(), 30u * 29u / 2u);
  const HsbmParams empty{CommunityTree(), {1.0}, {0.0}};
  EXPECT_EQ(sample_hsbm(empty, 30, 1).graph.edge_count(), 0u);
  auto flat = tree_sbm_from_probabilities(2, std::vector<double>{0.2, 0.5});
  flat.p.assign(flat.p.size(), 1.0);
  EXPECT_THROW(sample_hsbm(flat, 30, 1), ValidationError);
}

TEST(Generator, BlockDensitiesConcentrate) {
  const std::vector<double> a{40, 60, 80, 100};
  const auto params = btsbm_params(3, a, 3200);
  for (const std::uint64_t seed : {1u, 2u}) {
    const auto sample = sample_hsbm(params, 3200, seed);
    const auto k = params.tree.leaf_count();
    std::vector<double> size(k, 0.0);
    for (std::size_t i = 0; i < sample.truth.size(); ++i) size[sample.truth[i]] += 1.0;
    std::vector<std::vector<double>> count(k, std::vector<double>(k, 0.0));
    for (const auto& e : sample.graph.edges()) {
      auto x = sample.truth[e.u], y = sample.truth[e.v];
      if (x > y) std::swap(x, y);
      count[x][y] += 1.0;
    }
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = x; y < k; ++y) {
        const double p = params.link_probability(x, y);
        const double pairs = x == y ? size[x] * (size[x] - 1.0) / 2.0 : size[x] * size[y];
        const double sd = std::sqrt(p * (1.0 - p) / pairs);
        EXPECT_NEAR(count[x][y] / pairs, p, 4.0 * sd) << "blocks " << x << "," << y;
      }
  }
}

TEST(Generator, Deterministic) {
  const std::vector<double> a{2, 8};
  const auto params = btsbm_params(1, a, 400);
  const auto first = sample_hsbm(params, 400, 17);
  const auto second = sample_hsbm(params, 400, 17);
  EXPECT_EQ(first.graph, second.graph);
  EXPECT_EQ(first.truth, second.truth);
  EXPECT_FALSE(sample_hsbm(params, 400, 18).graph == first.graph);
}

TEST(Generator, FixedSizesAreContiguous) {
  const std::vector<double> a{1, 2, 3};
  const auto params = btsbm_params(2, a, 1000);
  const auto sample = sample_hsbm(params, 1001, 3, CommunitySizes::fixed);
  const auto sizes = sample.truth.cluster_sizes();
  for (const auto s : sizes) EXPECT_TRUE(s == 250 || s == 251);
  for (std::size_t i = 1; i < sample.truth.size(); ++i) EXPECT_LE(sample.truth[i - 1], sample.truth[i]);
}

TEST(Generator, BtsbmParameters) {
  const std::vector<double> a{40, 60, 80, 100};
  const auto params = btsbm_params(3, a, 3200);
  EXPECT_NEAR(params.p[0], 40.0 * std::log(3200.0) / 3200.0, 1e-15);
  EXPECT_NEAR(params.p[0], 0.100886, 1e-6);
  EXPECT_EQ(params.tree.leaf_count(), 8u);
  for (const auto pi : params.pi) EXPECT_DOUBLE_EQ(pi, 0.125);

  const std::vector<double> planted{0, 5};
  const auto two_block = btsbm_params(1, planted, 100);
  EXPECT_EQ(two_block.p[0], 0.0);

  const std::vector<double> decreasing{2, 1};
  EXPECT_THROW(btsbm_params(1, decreasing, 100), ValidationError);
  const std::vector<double> too_large{1, 200};
  EXPECT_THROW(btsbm_params(1, too_large, 100), ValidationError);
}

TEST(Generator, TernaryParameters) {
  const std::vector<double> a{10, 30, 40, 130};
  const auto params = ternary_tree_params(3, a, 2700);
  EXPECT_EQ(params.tree.leaf_count(), 27u);
  EXPECT_NEAR(params.pi[0] * 2700.0, 100.0, 1e-9);
  EXPECT_NEAR(params.link_probability(5, 5), 130.0 * std::log(2700.0) / 2700.0, 1e-15);
  EXPECT_NEAR(params.link_probability(5, 5), 0.380419, 1e-6);
  const std::vector<double> flat{1, 2};
  EXPECT_EQ(ternary_tree_params(1, flat, 90).tree.leaf_count(), 3u);
}

TEST(NoiseProfile, Shapes) {
  const auto adversarial = make_profile(NoiseKind::adversarial, 0.2, 3);
  EXPECT_DOUBLE_EQ(adversarial.zeta[0], 0.05);
  EXPECT_EQ(adversarial.zeta[1], 0.0);
  EXPECT_EQ(adversarial.zeta[2], 0.0);
  EXPECT_DOUBLE_EQ(adversarial.zeta[3], 0.8);

  const auto clean = make_profile(NoiseKind::uniform, 0.0, 4);
  EXPECT_EQ(clean.zeta.back(), 1.0);
  for (std::size_t h = 0; h < 4; ++h) EXPECT_EQ(clean.zeta[h], 0.0);

  const auto uniform = make_profile(NoiseKind::uniform, 0.7, 3);
  for (std::size_t h = 0; h < 3; ++h) EXPECT_NEAR(uniform.zeta[h], 0.1, 1e-15);
  EXPECT_NEAR(uniform.zeta[3], 0.3, 1e-15);
  EXPECT_NEAR(uniform.eta(), 0.7, 1e-15);

  EXPECT_THROW(make_profile(NoiseKind::uniform, 1.0, 3), ValidationError);
  EXPECT_THROW(make_profile(NoiseKind::uniform, -0.1, 3), ValidationError);
}

TEST(NoiseProfile, Normalized) {
  for (std::size_t d = 1; d <= 6; ++d)
    for (const double eta : {0.0, 0.13, 0.5, 0.99})
      for (const auto kind : {NoiseKind::uniform, NoiseKind::adversarial}) {
        const auto profile = make_profile(kind, eta, d);
        double total = 0.0;
        for (std::size_t h = 0; h <= d; ++h)
          total += static_cast<double>(theory::b_count(static_cast<int>(h), d)) * profile.zeta[h];
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NO_THROW(check_profile(profile));
      }
  EXPECT_THROW(check_profile(NoiseProfile{{0.1, 0.1, 0.5}}), ValidationError);
}

TEST(CorruptLabels, NoiselessIsIdentity) {
  const auto tree = CommunityTree::full(2, 3);
  const auto truth = Partition::over_leaves(testing::block_labels({5, 5, 5, 5, 5, 5, 5, 5}), 8);
  EXPECT_EQ(corrupt_labels(truth, tree, make_profile(NoiseKind::uniform, 0.0, 3), 4), truth);
}

TEST(CorruptLabels, ChangeRateMatchesEta) {
  const auto tree = CommunityTree::full(2, 3);
  const std::size_t n = 100000;
  std::vector<std::size_t> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = i % 8;
  const auto truth = Partition::over_leaves(raw, 8);
  for (const auto kind : {NoiseKind::uniform, NoiseKind::adversarial})
    for (const double eta : {0.1, 0.45}) {
      const auto noisy = corrupt_labels(truth, tree, make_profile(kind, eta, 3), 11);
      double changed = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        changed += noisy[i] != truth[i];
        if (kind == NoiseKind::adversarial && noisy[i] != truth[i]) {
          ASSERT_EQ(tree.leaf_lca_depth(noisy[i], truth[i]), 0u);
        }
      }
      EXPECT_NEAR(changed / static_cast<double>(n), eta, 3.0 * std::sqrt(eta * (1 - eta) / static_cast<double>(n)));
    }
}

TEST(CorruptLabels, UniformConfusionMatrix) {
  const auto tree = CommunityTree::full(2, 3);
  const std::size_t per_block = 20000;
  std::vector<std::size_t> raw;
  for (std::size_t b = 0; b < 8; ++b) raw.insert(raw.end(), per_block, b);
  const auto truth = Partition::over_leaves(raw, 8);
  const auto profile = make_profile(NoiseKind::uniform, 0.35, 3);
  const auto noisy = corrupt_labels(truth, tree, profile, 5);
  std::vector<std::vector<double>> confusion(8, std::vector<double>(8, 0.0));
  for (std::size_t i = 0; i < raw.size(); ++i) confusion[truth[i]][noisy[i]] += 1.0;
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      const double p = profile.zeta[tree.leaf_lca_depth(a, b)];
      const double sd = std::sqrt(static_cast<double>(per_block) * p * (1 - p));
      EXPECT_NEAR(confusion[a][b], static_cast<double>(per_block) * p, 4.0 * sd);
    }
}

TEST(CorruptLabels, RejectsNonBinaryTrees) {
  const auto tree = CommunityTree::full(3, 2);
  const auto truth = Partition::over_leaves({0, 1, 2}, 9);
  EXPECT_THROW(corrupt_labels(truth, tree, make_profile(NoiseKind::uniform, 0.1, 2), 1), ValidationError);
}

}  // namespace
}  // namespace hcd
