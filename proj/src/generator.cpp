#include "hcd/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hcd/random.hpp"
#include "hcd/theory.hpp"

namespace hcd {

namespace {

// Calls emit(index) for each successful Bernoulli(p) trial among `count`
// trials, skipping geometrically between successes.
template <typename Emit>
void bernoulli_successes(std::uint64_t count, double p, Rng& rng, Emit&& emit) {
  if (count == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t i = 0; i < count; ++i) emit(i);
    return;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t pos = 0;
  while (true) {
    const double skip = std::floor(std::log1p(-uniform01(rng)) / log_q);
    if (skip >= static_cast<double>(count - pos)) return;
    pos += static_cast<std::uint64_t>(skip);
    emit(pos);
    if (++pos >= count) return;
  }
}

std::vector<std::size_t> fixed_sizes(std::span<const double> pi, std::size_t n) {
  std::vector<std::size_t> sizes(pi.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t a = 0; a < pi.size(); ++a) {
    const double exact = pi[a] * static_cast<double>(n);
    sizes[a] = static_cast<std::size_t>(std::floor(exact));
    assigned += sizes[a];
    remainders.emplace_back(-(exact - std::floor(exact)), a);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++sizes[remainders[i % remainders.size()].second];
  return sizes;
}

}  // namespace

SampledGraph sample_hsbm(const HsbmParams& params, std::size_t n, std::uint64_t seed, CommunitySizes sizes) {
  if (const auto violations = validate_params(params); !violations.empty())
    throw ValidationError("invalid HSBM parameters: " + violations.front());
  if (n < 1) throw ValidationError("node count must be >= 1");

  const auto k = params.tree.leaf_count();
  std::vector<std::size_t> leaf(n);
  if (sizes == CommunitySizes::fixed) {
    const auto counts = fixed_sizes(params.pi, n);
    std::size_t node = 0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t c = 0; c < counts[a]; ++c) leaf[node++] = a;
  } else {
    std::vector<double> cumulative(k);
    std::partial_sum(params.pi.begin(), params.pi.end(), cumulative.begin());
    auto rng = make_rng(seed, 0);
    for (auto& l : leaf) {
      const double u = uniform01(rng) * cumulative.back();
      l = std::min<std::size_t>(
          static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin()),
          k - 1);
    }
  }

  const auto members = Partition::over_leaves(leaf, k).members();
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      const auto& ma = members[a];
      const auto& mb = members[b];
      const double p = params.link_probability(a, b);
      auto rng = make_rng(seed, 1 + a * k + b);
      if (a == b) {
        // Pairs (r, c), r < c, in lexicographic order; row r holds m-1-r pairs.
        const std::uint64_t m = ma.size();
        std::uint64_t row = 0;
        std::uint64_t row_start = 0;
        bernoulli_successes(m * (m - (m > 0)) / 2, p, rng, [&](std::uint64_t index) {
          while (index >= row_start + (m - 1 - row)) {
            row_start += m - 1 - row;
            ++row;
          }
          const auto col = row + 1 + (index - row_start);
          edges.push_back({ma[row], ma[col]});
        });
      } else {
        const std::uint64_t cols = mb.size();
        bernoulli_successes(static_cast<std::uint64_t>(ma.size()) * cols, p, rng,
                            [&](std::uint64_t index) { edges.push_back({ma[index / cols], mb[index % cols]}); });
      }
    }
  }
  return {Graph(n, std::move(edges)), Partition::over_leaves(std::move(leaf), k)};
}

HsbmParams tree_sbm_params(std::uint32_t arity, std::size_t depth, std::span<const double> a, std::size_t n) {
  if (n < 2) throw ValidationError("node count must be >= 2 for log(n)/n scaling");
  const double scale = std::log(static_cast<double>(n)) / static_cast<double>(n);
  std::vector<double> p(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) p[k] = a[k] * scale;
  if (a.size() != depth + 1)
    throw ValidationError("expected " + std::to_string(depth + 1) + " rates a_0..a_d, got " +
                          std::to_string(a.size()));
  for (std::size_t k = 1; k < a.size(); ++k)
    if (!(a[k - 1] < a[k])) throw ValidationError("rates must be strictly increasing (assortativity)");
  if (p.back() > 1.0) throw ValidationError("a_d log(n)/n exceeds 1");
  return tree_sbm_from_probabilities(arity, p);
}

HsbmParams tree_sbm_from_probabilities(std::uint32_t arity, std::span<const double> p_by_depth) {
  if (p_by_depth.empty()) throw ValidationError("need at least one probability");
  const auto depth = p_by_depth.size() - 1;
  HsbmParams params{CommunityTree::full(arity, depth), {}, {}};
  const auto k = params.tree.leaf_count();
  params.pi.assign(k, 1.0 / static_cast<double>(k));
  params.p.resize(params.tree.node_count());
  for (std::size_t u = 0; u < params.tree.node_count(); ++u) params.p[u] = p_by_depth[params.tree.path(u).depth()];
  if (const auto violations = validate_params(params); !violations.empty())
    throw ValidationError("invalid tree SBM: " + violations.front());
  return params;
}

NoiseProfile make_profile(NoiseKind kind, double eta, std::size_t depth) {
  if (!(eta >= 0.0 && eta < 1.0)) throw ValidationError("eta must lie in [0, 1)");
  if (depth < 1) throw ValidationError("noise profiles need depth >= 1");
  NoiseProfile profile{std::vector<double>(depth + 1, 0.0)};
  if (kind == NoiseKind::uniform) {
    const double k = std::ldexp(1.0, static_cast<int>(depth));
    for (std::size_t h = 0; h < depth; ++h) profile.zeta[h] = eta / (k - 1.0);
  } else {
    profile.zeta[0] = eta / std::ldexp(1.0, static_cast<int>(depth) - 1);
  }
  profile.zeta[depth] = 1.0 - eta;
  return profile;
}

void check_profile(const NoiseProfile& profile) {
  if (profile.zeta.size() < 2) throw ValidationError("noise profile needs depth >= 1");
  double total = 0.0;
  for (std::size_t h = 0; h < profile.zeta.size(); ++h) {
    if (!(profile.zeta[h] >= 0.0 && profile.zeta[h] <= 1.0))
      throw ValidationError("zeta(" + std::to_string(h) + ") outside [0, 1]");
    total += static_cast<double>(theory::b_count(static_cast<int>(h), profile.depth())) * profile.zeta[h];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("noise profile is not normalized");
}

Partition corrupt_labels(const Partition& truth, const CommunityTree& tree, const NoiseProfile& profile,
                         std::uint64_t seed) {
  if (!tree.is_binary() || !tree.is_full_balanced() || tree.depth() < 1)
    throw ValidationError("label corruption requires a full balanced binary tree");
  if (profile.depth() != tree.depth()) throw ValidationError("noise profile depth does not match the tree");
  check_profile(profile);
  const auto k = tree.leaf_count();
  if (truth.cluster_count() > k) throw ValidationError("labels exceed the tree's leaves");

  // cumulative[a][b]: probability that a node of block a lands in a block <= b.
  std::vector<std::vector<double>> cumulative(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      acc += profile.zeta[tree.leaf_lca_depth(a, b)];
      cumulative[a][b] = acc;
    }
  }
  auto rng = make_rng(seed, 0);
  std::vector<std::size_t> labels(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& row = cumulative[truth[i]];
    const double u = uniform01(rng) * row.back();
    labels[i] = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(row.begin(), row.end(), u) - row.begin()), k - 1);
  }
  return Partition::over_leaves(std::move(labels), k);
}

}  // namespace hcd
