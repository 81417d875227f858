#pragma once

// Information-theoretic thresholds for hierarchical SBMs: Renyi and
// Chernoff-Hellinger divergences, the minimum divergences I and I_q, their
// closed form on balanced binary trees, the top-down / bottom-up feasibility
// scores J_q, and the robustness condition of average linkage under label
// noise.
//
// Depth-indexed sequences (a_0..a_d, p_0..p_d) are passed as spans of length
// d + 1; d is inferred from the length.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hcd/generator.hpp"
#include "hcd/model.hpp"

namespace hcd::theory {

/// Order-t Renyi divergence between Ber(p) and Ber(q), t in (0, 1).
/// Returns +inf when {p, q} = {0, 1}.
double renyi_divergence(double t, double p, double q);

/// sup over t in (0,1) of (1 - t) * sum_c pi_c D_t(Ber(p_ac) || Ber(p_bc)).
/// The objective is concave in t; maximized by golden-section search.
double ch_divergence(std::size_t leaf_a, std::size_t leaf_b, const HsbmParams& params);

/// Objective of ch_divergence at a fixed t.
double ch_objective(double t, std::size_t leaf_a, std::size_t leaf_b, const HsbmParams& params);

/// Minimum CH divergence over all leaf pairs. Requires K >= 2.
double min_divergence_I(const HsbmParams& params);

/// Minimum CH divergence over leaf pairs whose lca has depth <= q - 1.
/// Requires 1 <= q <= tree depth.
double min_divergence_Iq(const HsbmParams& params, std::size_t q);

/// Closed form of I_q on a balanced BTSBM with link probabilities p_0..p_d.
double iq_btsbm(std::span<const double> p, std::size_t q);

/// Top-down feasibility score J_q^td for rates a_0..a_d.
double j_top_down(std::size_t q, std::span<const double> a);
/// Bottom-up feasibility score J_q^bu for rates a_0..a_d.
double j_bottom_up(std::size_t q, std::span<const double> a);

struct ThresholdRecord {
  std::size_t q;
  double iq;         ///< raw I_q (finite N), NaN when no N was supplied
  double iq_scaled;  ///< N * I_q / log N, or its N -> infinity limit without N
  double j_td;
  double j_bu;
  bool feasible_td;  ///< min_{q' <= q} J_q'^td > 1
  bool feasible_bu;  ///< J_q^bu > 1
};

/// Per-depth thresholds. I_q is non-increasing in q.
struct ThresholdReport {
  std::vector<ThresholdRecord> depths;  ///< q = 1..d
};

/// Thresholds in the N-free limit (I_q in a-units).
ThresholdReport feasible_depths(std::span<const double> a);
/// Thresholds with I_q evaluated exactly for p_k = a_k log N / N.
ThresholdReport feasible_depths(std::span<const double> a, std::size_t n);

/// Number of leaves at similarity exactly h from a fixed leaf of a balanced
/// binary tree of depth d; B(-1) = 2^d.
std::uint64_t b_count(int h, std::size_t d);

/// Expected edge density inside the super-community at similarity >= h.
double p_bar(std::size_t h, std::span<const double> p);

/// Left-hand side of the average-linkage robustness condition for a given
/// h_ac in [0, d - 2]. The tree is recovered iff it is positive for all h_ac.
double robustness_lhs(std::span<const double> p, const NoiseProfile& profile, std::size_t h_ac);

/// True when robustness_lhs > 0 for every h_ac in [0, d - 2].
bool robustness_condition(std::span<const double> p, const NoiseProfile& profile);

/// Largest admissible adversarial noise when pbar_1 >= p_{d-1}; nullopt when
/// pbar_1 < p_{d-1} (recovery for every eta < 1/2).
std::optional<double> eta_minus(std::span<const double> p);

/// Sufficient condition for recovery under a non-decreasing profile:
/// (zeta(d-1) + zeta(d-2)) / 2 < 1 - eta.
bool monotone_profile_predicts_recovery(const NoiseProfile& profile);

/// Recovery verdict for the adversarial profile at noise eta.
bool adversarial_predicts_recovery(std::span<const double> p, double eta);

}  // namespace hcd::theory
