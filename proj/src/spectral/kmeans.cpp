#include <algorithm>
#include <cmath>
#include <limits>

#include "hcd/random.hpp"
#include "hcd/simd/kernels.hpp"
#include "hcd/spectral.hpp"

namespace hcd {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::span<const double> row(const RowMatrix& m, std::size_t i) {
  return {m.data() + i * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

std::span<double> row(RowMatrix& m, std::size_t i) {
  return {m.data() + i * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

struct Run {
  std::vector<std::size_t> labels;
  double inertia;
  RowMatrix centroids;
};

// Index drawn with probability proportional to weights; the last positive
// weight absorbs rounding.
std::size_t weighted_pick(const std::vector<double>& weights, double total, Rng& rng) {
  double target = uniform01(rng) * total;
  std::size_t chosen = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    chosen = i;
    target -= weights[i];
    if (target < 0.0) break;
  }
  return chosen;
}

RowMatrix seed_plus_plus(const RowMatrix& points, std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  RowMatrix centroids(static_cast<Eigen::Index>(k), points.cols());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t pick = static_cast<std::size_t>(rng() % n);
  for (std::size_t c = 0; c < k; ++c) {
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], simd::squared_distance(row(points, i), row(centroids, c)));
      total += nearest[i];
    }
    if (c + 1 == k) break;
    // All remaining mass zero: duplicates only, take the next unused index.
    pick = total > 0.0 ? weighted_pick(nearest, total, rng) : (pick + 1) % n;
  }
  return centroids;
}

Run lloyd(const RowMatrix& points, RowMatrix centroids, const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto k = static_cast<std::size_t>(centroids.rows());
  std::vector<std::size_t> labels(n, 0);
  std::vector<double> distance(n, 0.0);
  double previous = std::numeric_limits<double>::infinity();
  double inertia = 0.0;
  for (std::size_t iteration = 0; iteration < options.max_iterations; ++iteration) {
    inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = simd::squared_distance(row(points, i), row(centroids, c));
        if (d < best) {
          best = d;
          labels[i] = c;
        }
      }
      distance[i] = best;
      inertia += best;
    }
    if (previous - inertia <= options.tolerance * std::max(inertia, std::numeric_limits<double>::min())) break;
    previous = inertia;

    RowMatrix sums = RowMatrix::Zero(centroids.rows(), centroids.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      simd::axpy(1.0, row(points, i), row(sums, labels[i]));
      ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        continue;
      }
      const auto far = static_cast<std::size_t>(std::max_element(distance.begin(), distance.end()) - distance.begin());
      centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
      distance[far] = 0.0;
    }
  }
  return {std::move(labels), inertia, std::move(centroids)};
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1 || k > n) throw ValidationError("k-means needs 1 <= k <= number of points");
  const RowMatrix data = points;
  Run best{{}, std::numeric_limits<double>::infinity(), {}};
  for (std::size_t restart = 0; restart < std::max<std::size_t>(options.restarts, 1); ++restart) {
    Rng rng = make_rng(seed, restart);
    auto run = lloyd(data, seed_plus_plus(data, k, rng), options);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return {Partition::over_leaves(std::move(best.labels), k), best.inertia, best.centroids};
}

}  // namespace hcd
