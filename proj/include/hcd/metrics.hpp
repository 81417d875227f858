#pragma once

// Evaluation metrics: permutation-optimal clustering loss, accuracy at a tree
// depth, the tree-similarity error ratio and dendrogram inversion counts.

#include <cstdint>
#include <span>
#include <vector>

#include "hcd/model.hpp"

namespace hcd {

/// Minimum over label matchings of sum_k |C_k symmetric-difference C^_tau(k)|.
/// The side with fewer clusters is padded with empty clusters. Solved as a
/// minimum-cost assignment (Hungarian algorithm, O(K^3)).
std::uint64_t clustering_loss(const Partition& truth, const Partition& pred);

/// Minimum-cost perfect assignment on a square cost matrix; returns the
/// column assigned to each row.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<std::int64_t>>& cost);

/// 1 - loss(sc_q(truth), sc_q(pred)) / N. Each side is cut at depth q with
/// leaves shallower than q kept whole.
double accuracy_at_depth(const Partition& truth_labels, const CommunityTree& truth_tree, const Partition& pred_labels,
                         const CommunityTree& pred_tree, std::size_t q);

/// ||S(pred_tree, pred_labels) - S(truth_tree, truth_labels)||_F^2 /
/// ||S(truth_tree, truth_labels)||_F^2 where S_ij is the depth of the lca of
/// the leaves of nodes i and j (i = j included). Aggregated over pairs of
/// (truth leaf, pred leaf) cells, never forming the N x N matrices.
double tree_error_ratio(const CommunityTree& truth_tree, const Partition& truth_labels,
                        const CommunityTree& pred_tree, const Partition& pred_labels);

/// Same labelling on both trees: `labels` holds leaf indices of truth_tree;
/// `pred_leaf_of` maps each of them to a pred_tree leaf (identity if empty).
double tree_error_ratio(const CommunityTree& truth_tree, const CommunityTree& pred_tree, const Partition& labels,
                        std::span<const std::size_t> pred_leaf_of = {});

/// Merges whose similarity strictly exceeds the similarity of one of their
/// child merges.
std::size_t count_inversions(const Dendrogram& dendrogram);

}  // namespace hcd
