#pragma once

// Seeded HSBM sampling, BTSBM / ternary parameter constructors and the
// label-corruption noise models.

#include <cstdint>
#include <span>
#include <vector>

#include "hcd/model.hpp"

namespace hcd {

struct SampledGraph {
  Graph graph;
  Partition truth;  ///< leaf index of every node (Partition::over_leaves)
};

enum class CommunitySizes {
  multinomial,  ///< each node draws its leaf from pi independently
  fixed,        ///< leaf sizes round(n * pi) by largest remainder, contiguous ids
};

/// Samples a graph from the HSBM. Leaf draws use stream 0 of `seed`; the
/// edges of leaf pair (a, b), a <= b, use stream 1 + a * K + b, with
/// geometric skipping over the lexicographic pair order inside the block.
SampledGraph sample_hsbm(const HsbmParams& params, std::size_t n, std::uint64_t seed,
                         CommunitySizes sizes = CommunitySizes::multinomial);

/// Full balanced tree of the given arity and depth with uniform pi and
/// p(u) = a[|u|] * log(n) / n.
HsbmParams tree_sbm_params(std::uint32_t arity, std::size_t depth, std::span<const double> a, std::size_t n);

inline HsbmParams btsbm_params(std::size_t depth, std::span<const double> a, std::size_t n) {
  return tree_sbm_params(2, depth, a, n);
}
inline HsbmParams ternary_tree_params(std::size_t depth, std::span<const double> a, std::size_t n) {
  return tree_sbm_params(3, depth, a, n);
}

/// Full balanced tree with per-depth probabilities given directly.
HsbmParams tree_sbm_from_probabilities(std::uint32_t arity, std::span<const double> p_by_depth);

/// Misclustering profile: zeta[h] is the probability of landing in one given
/// block whose lca with the true block has depth h; zeta[d] = 1 - eta.
struct NoiseProfile {
  std::vector<double> zeta;  ///< indexed by depth 0..d

  std::size_t depth() const { return zeta.size() - 1; }
  /// 1 - zeta(d).
  double eta() const { return 1.0 - zeta.back(); }
};

enum class NoiseKind { uniform, adversarial };

NoiseProfile make_profile(NoiseKind kind, double eta, std::size_t depth);

/// Throws unless sum_h B(h) * zeta(h) = 1 within 1e-12.
void check_profile(const NoiseProfile& profile);

/// Moves every node of block a to block b with probability zeta(|lca(a,b)|),
/// independently per node, in ascending node order. The graph is untouched.
Partition corrupt_labels(const Partition& truth, const CommunityTree& tree, const NoiseProfile& profile,
                         std::uint64_t seed);

}  // namespace hcd
