#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hcd/generator.hpp"
#include "hcd/theory.hpp"
#include "support.hpp"

namespace hcd {
namespace {

using namespace hcd::theory;

// Order-t Renyi divergence written out independently of the library.
double reference_renyi(double t, double p, double q) {
  return std::log(std::pow(1 - p, t) * std::pow(1 - q, 1 - t) + std::pow(p, t) * std::pow(q, 1 - t)) / (t - 1);
}

// Dense t-grid maximum of (1 - t) sum_c pi_c D_t(p_ac, p_bc).
double grid_ch(std::size_t a, std::size_t b, const HsbmParams& params, int points = 100000) {
  double best = 0.0;
  for (int i = 1; i < points; ++i) {
    const double t = static_cast<double>(i) / points;
    double total = 0.0;
    for (std::size_t c = 0; c < params.tree.leaf_count(); ++c) {
      const double p = params.link_probability(a, c), q = params.link_probability(b, c);
      if (p != q) total += params.pi[c] * reference_renyi(t, p, q);
    }
    best = std::max(best, (1 - t) * total);
  }
  return best;
}

std::vector<double> random_increasing(std::mt19937_64& rng, std::size_t length, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(length);
  for (auto& x : v) x = u(rng);
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < length; ++i)
    if (v[i] <= v[i - 1]) v[i] = std::nextafter(v[i - 1], hi + 1);
  return v;
}

TEST(Renyi, Examples) {
  EXPECT_EQ(renyi_divergence(0.3, 0.3, 0.3), 0.0);
  EXPECT_NEAR(renyi_divergence(0.5, 0.0, 0.4), -std::log(1 - 0.4), 1e-14);
  EXPECT_NEAR(renyi_divergence(0.5, 0.1, 0.2), 0.020203, 1e-6);
  EXPECT_NEAR(renyi_divergence(0.5, 0.1, 0.2), -2 * std::log(std::sqrt(0.9 * 0.8) + std::sqrt(0.02)), 1e-15);
  EXPECT_TRUE(std::isinf(renyi_divergence(0.5, 0.0, 1.0)));
  EXPECT_THROW(renyi_divergence(1.0, 0.1, 0.2), ValidationError);
}

TEST(Renyi, SymmetricAtHalf) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng), q = u(rng);
    EXPECT_EQ(renyi_divergence(0.5, p, q), renyi_divergence(0.5, q, p));
    const double t = 0.01 + 0.98 * u(rng);
    EXPECT_NEAR(renyi_divergence(t, p, q), reference_renyi(t, p, q), 1e-12);
  }
}

TEST(ChDivergence, IdenticalRowsGiveZero) {
  HsbmParams params{CommunityTree::full(2, 1), {0.5, 0.5}, {0.3, 0.3, 0.3}};
  EXPECT_EQ(ch_divergence(0, 1, params), 0.0);
  EXPECT_EQ(min_divergence_I(params), 0.0);
}

TEST(ChDivergence, TwoBlockClosedForm) {
  const auto params = tree_sbm_from_probabilities(2, std::vector<double>{0.05, 0.2});
  EXPECT_NEAR(min_divergence_I(params), 0.5 * reference_renyi(0.5, 0.2, 0.05), 1e-12);
}

TEST(ChDivergence, MatchesDenseGridOnAsymmetricInstances) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_increasing(rng, 3, 0.01, 0.6);
    auto params = tree_sbm_from_probabilities(2, p);
    params.pi = {0.1, 0.2, 0.3, 0.4};
    params.p[*params.tree.find(TreePath::parse("11"))] += 0.2 * u(rng);
    const double numeric = ch_divergence(0, 3, params);
    EXPECT_NEAR(numeric, grid_ch(0, 3, params), 1e-8 * numeric + 1e-12);
  }
}

TEST(MinDivergence, IqMatchesClosedFormOnBtsbm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + rng() % 3;
    const auto p = random_increasing(rng, d + 1, 0.001, 0.5);
    const auto params = tree_sbm_from_probabilities(2, p);
    for (std::size_t q = 1; q <= d; ++q) {
      const double closed = iq_btsbm(p, q);
      EXPECT_NEAR(min_divergence_Iq(params, q), closed, 1e-8 * closed);
    }
    EXPECT_NEAR(min_divergence_Iq(params, d), min_divergence_I(params), 1e-15);
  }
}

TEST(MinDivergence, CrossImplementationAtDeskScale) {
  const std::vector<double> a{40, 60, 80, 100};
  const auto params = btsbm_params(3, a, 3200);
  std::vector<double> p(4);
  for (std::size_t k = 0; k < 4; ++k) p[k] = params.p[*params.tree.find(TreePath(std::vector<std::uint32_t>(k, 0)))];
  EXPECT_NEAR(iq_btsbm(p, 2), min_divergence_Iq(params, 2), 1e-8 * iq_btsbm(p, 2));
  EXPECT_NEAR(iq_btsbm(p, 3), reference_renyi(0.5, p[2], p[3]) / 8, 1e-15);
}

TEST(MinDivergence, LeadingTermAtLargeN) {
  const std::vector<double> a{40, 60, 80, 100};
  const std::size_t n = 1000000;
  const double leading = std::pow(std::sqrt(100.0) - std::sqrt(80.0), 2) / 8 * std::log(1e6) / 1e6;
  EXPECT_NEAR(min_divergence_I(btsbm_params(3, a, n)) / leading, 1.0, 0.05);
}

TEST(MinDivergence, IqIsNonIncreasingInDepth) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + rng() % 2;
    auto params = tree_sbm_from_probabilities(2, random_increasing(rng, d + 1, 0.01, 0.3));
    // Random assortative perturbation per node and random pi.
    for (std::size_t v = 1; v < params.tree.node_count(); ++v)
      params.p[v] = params.p[*params.tree.parent(v)] + 0.01 + 0.2 * u(rng);
    double total = 0.0;
    for (auto& pi : params.pi) total += (pi = 0.1 + u(rng));
    for (auto& pi : params.pi) pi /= total;
    ASSERT_TRUE(validate_params(params).empty());
    double previous = min_divergence_Iq(params, 1);
    for (std::size_t q = 2; q <= d; ++q) {
      const double current = min_divergence_Iq(params, q);
      EXPECT_LE(current, previous + 1e-12);
      previous = current;
    }
  }
}

TEST(MinDivergence, DepthValidation) {
  const auto params = tree_sbm_from_probabilities(2, std::vector<double>{0.1, 0.2});
  EXPECT_THROW(min_divergence_Iq(params, 0), ValidationError);
  EXPECT_THROW(min_divergence_Iq(params, 2), ValidationError);
  EXPECT_THROW(min_divergence_I(HsbmParams{CommunityTree(), {1.0}, {0.5}}), ValidationError);
  EXPECT_THROW(iq_btsbm(std::vector<double>{0.2, 0.1}, 1), ValidationError);
}

TEST(Feasibility, TopDownReferenceValues) {
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> cases{
      {{2.2, 2.5, 3, 25}, {0.96, 1.17, 1.33}},
      {{3, 9, 15, 21}, {1.89, 0.39, 0.06}},
      {{2.2, 2.5, 4, 22}, {0.85, 1.02, 0.90}},
  };
  for (const auto& [a, expected] : cases)
    for (std::size_t q = 1; q <= 3; ++q) EXPECT_NEAR(j_top_down(q, a), expected[q - 1], 0.005);
}

TEST(Feasibility, TopDownDirectEvaluation) {
  // (2.2, 2.4, 4, 22): inner sums 30.8 and 26, subtracted roots of 8.8 and 4.8.
  const std::vector<double> a{2.2, 2.4, 4, 22};
  const auto sq = [](double x) { return x * x; };
  EXPECT_NEAR(j_top_down(1, a), sq(std::sqrt(30.8) - std::sqrt(8.8)) / 8, 1e-14);
  EXPECT_NEAR(j_top_down(2, a), sq(std::sqrt(26.0) - std::sqrt(4.8)) / 8, 1e-14);
  EXPECT_NEAR(j_top_down(3, a), sq(std::sqrt(22.0) - 2.0) / 8, 1e-14);
  EXPECT_NEAR(j_top_down(1, a), 0.834, 5e-4);
  EXPECT_NEAR(j_top_down(2, a), 1.057, 5e-4);
}

TEST(Feasibility, BottomUpDirectEvaluation) {
  const std::vector<double> a{2.2, 2.5, 3, 25};
  const auto sq = [](double x) { return x * x; };
  const double s = std::sqrt(2.2);
  const double expected = (sq(s - 5) + sq(s - std::sqrt(3.0)) + 2 * sq(s - std::sqrt(2.5))) / 8;
  EXPECT_NEAR(j_bottom_up(1, a), expected, 1e-14);
  EXPECT_NEAR(j_bottom_up(1, a), 1.556, 5e-4);
  const std::vector<double> flat{3, 3, 3};
  EXPECT_EQ(j_bottom_up(1, flat), 0.0);
}

TEST(Feasibility, BottomUpDominatesTopDown) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + rng() % 4;
    const auto a = random_increasing(rng, d + 1, 0.0, 100.0);
    for (std::size_t q = 1; q < d; ++q) EXPECT_GT(j_bottom_up(q, a), j_top_down(q, a));
    EXPECT_LE(std::abs(j_bottom_up(d, a) - j_top_down(d, a)), 1e-12);
  }
}

TEST(Feasibility, Reports) {
  const auto report = feasible_depths(std::vector<double>{40, 45, 50, 100});
  ASSERT_EQ(report.depths.size(), 3u);
  EXPECT_NEAR(report.depths[1].j_bu, 1.37, 0.01);
  EXPECT_NEAR(report.depths[1].j_td, 0.95, 0.01);
  EXPECT_TRUE(report.depths[1].feasible_bu);
  EXPECT_FALSE(report.depths[1].feasible_td);

  const auto hard = feasible_depths(std::vector<double>{40, 60, 65, 100});
  EXPECT_LT(hard.depths[1].j_bu, 1.0);
  EXPECT_FALSE(hard.depths[1].feasible_bu);

  const auto easy = feasible_depths(std::vector<double>{3, 9, 15, 21});
  EXPECT_TRUE(easy.depths[0].feasible_td);
  EXPECT_FALSE(easy.depths[1].feasible_td);

  const auto finite = feasible_depths(std::vector<double>{40, 45, 50, 100}, 3200);
  for (const auto& r : finite.depths) {
    EXPECT_NEAR(r.iq_scaled, r.iq * 3200 / std::log(3200.0), 1e-12 * r.iq_scaled);
    // The Hellinger form dominates its sparse limit (sqrt a - sqrt b)^2.
    EXPECT_GT(r.iq_scaled, r.j_bu);
  }
  const auto sparse = feasible_depths(std::vector<double>{40, 45, 50, 100}, 10000000);
  for (const auto& r : sparse.depths) EXPECT_NEAR(r.iq_scaled, r.j_bu, 0.01 * r.j_bu);
}

TEST(BCount, Values) {
  EXPECT_EQ(b_count(0, 3), 4u);
  EXPECT_EQ(b_count(1, 3), 2u);
  EXPECT_EQ(b_count(2, 3), 1u);
  EXPECT_EQ(b_count(3, 3), 1u);
  EXPECT_EQ(b_count(-1, 3), 8u);
  EXPECT_EQ(b_count(0, 1), 1u);
  EXPECT_EQ(b_count(1, 1), 1u);
  EXPECT_THROW(b_count(4, 3), ValidationError);
  for (std::size_t d = 1; d <= 8; ++d)
    for (int h1 = 0; h1 <= static_cast<int>(d); ++h1) {
      std::uint64_t sum = 0;
      for (int h = h1; h <= static_cast<int>(d); ++h) sum += b_count(h, d);
      EXPECT_EQ(sum, b_count(h1 - 1, d));
    }
}

TEST(PBar, Values) {
  const std::vector<double> p{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(p_bar(3, p), 4.0);
  EXPECT_DOUBLE_EQ(p_bar(1, p), 2.75);
  const std::vector<double> p2{0.1, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(p_bar(1, p2), 0.4);
  EXPECT_THROW(p_bar(0, p), ValidationError);
}

TEST(Robustness, NoiselessProfile) {
  const std::vector<double> p{0.01, 0.02, 0.05, 0.09};
  const auto clean = make_profile(NoiseKind::uniform, 0.0, 3);
  for (std::size_t h = 0; h <= 1; ++h) EXPECT_NEAR(robustness_lhs(p, clean, h), p[2] - p[h], 1e-15);
  EXPECT_TRUE(robustness_condition(p, clean));
  EXPECT_THROW(robustness_lhs(p, clean, 2), ValidationError);
}

TEST(Robustness, AdversarialClosedForms) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng() % 4;
    const auto p = random_increasing(rng, d + 1, 0.0, 1.0);
    const double eta = 0.99 * u(rng);
    const auto profile = make_profile(NoiseKind::adversarial, eta, d);
    const double pb = p_bar(1, p);
    const double at_root = (eta * eta - 2 * eta * (1 - eta)) * (pb - p[0]) + (p[d - 1] - p[0]) * (1 - eta) * (1 - eta);
    EXPECT_NEAR(robustness_lhs(p, profile, 0), at_root, 1e-10);
    for (std::size_t h = 1; h + 2 <= d; ++h)
      EXPECT_NEAR(robustness_lhs(p, profile, h), (p[d - 1] - p[h]) * (1 - eta) * (1 - eta), 1e-10);
  }
}

TEST(Robustness, EtaMinus) {
  // pbar_1 = p_{d-1}: radicand zero, eta_- = 1/2.
  const std::vector<double> balanced{0.01, 0.02, 0.04, 0.08};
  EXPECT_DOUBLE_EQ(p_bar(1, balanced), balanced[2]);
  EXPECT_NEAR(*eta_minus(balanced), 0.5, 1e-15);

  const std::vector<double> p{1e-3, 2e-3, 3e-3, 10e-3};
  EXPECT_NEAR(p_bar(1, p), 4.25e-3, 1e-15);
  const auto bound = eta_minus(p);
  ASSERT_TRUE(bound.has_value());
  EXPECT_GT(*bound, 0.0);
  EXPECT_LT(*bound, 0.5);
  const auto below = make_profile(NoiseKind::adversarial, *bound - 1e-6, 3);
  const auto above = make_profile(NoiseKind::adversarial, *bound + 1e-6, 3);
  EXPECT_GT(robustness_lhs(p, below, 0), 0.0);
  EXPECT_LT(robustness_lhs(p, above, 0), 0.0);
  EXPECT_TRUE(adversarial_predicts_recovery(p, *bound - 1e-6));
  EXPECT_FALSE(adversarial_predicts_recovery(p, *bound + 1e-6));

  const std::vector<double> steep{0.01, 0.02, 0.09, 0.1};
  EXPECT_FALSE(eta_minus(steep).has_value());
  EXPECT_TRUE(adversarial_predicts_recovery(steep, 0.49));
  EXPECT_FALSE(adversarial_predicts_recovery(steep, 0.5));
}

TEST(Robustness, UniformProfileVerdict) {
  EXPECT_TRUE(monotone_profile_predicts_recovery(make_profile(NoiseKind::uniform, 0.5, 3)));
  EXPECT_TRUE(monotone_profile_predicts_recovery(make_profile(NoiseKind::uniform, 0.87, 3)));
  EXPECT_FALSE(monotone_profile_predicts_recovery(make_profile(NoiseKind::uniform, 0.88, 3)));
  EXPECT_FALSE(monotone_profile_predicts_recovery(make_profile(NoiseKind::adversarial, 0.1, 3)));
}

}  // namespace
}  // namespace hcd
