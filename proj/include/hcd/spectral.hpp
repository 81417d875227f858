#pragma once

// Spectral machinery: symmetric operators, the Bethe-Hessian, a symmetric
// eigensolver (dense below a size threshold, thick-restart Lanczos above),
// k-means, the Bethe-Hessian flat clusterer and the top-down recursive
// bipartitioning baseline.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hcd/model.hpp"

namespace hcd {

/// Raised when the iterative eigensolver exhausts its restart budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Real symmetric matrix stored as the upper triangle in CSR form, so
/// symmetry holds by construction.
class SymmetricMatrix {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SymmetricMatrix() = default;
  /// Entries may name either triangle; (i, j) and (j, i) address the same
  /// element and repeated entries are summed.
  SymmetricMatrix(std::size_t n, std::vector<Entry> entries);
  /// Upper triangle of a dense square matrix (zeros dropped).
  static SymmetricMatrix from_dense(const Eigen::MatrixXd& dense);

  std::size_t dimension() const { return n_; }
  std::size_t stored_entries() const { return values_.size(); }

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Eigen::MatrixXd to_dense() const;
  /// Largest absolute row sum, an upper bound on the spectral norm.
  double norm_bound() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

/// H(r) = (r^2 - 1) I - r A + D.
SymmetricMatrix bethe_hessian(const Graph& graph, double r);

/// Adjacency matrix as a symmetric operator.
SymmetricMatrix adjacency_matrix(const Graph& graph);

enum class SpectrumEnd { smallest, largest };

struct EigenOptions {
  /// Matrices up to this dimension use a dense decomposition.
  std::size_t dense_threshold = 512;
  std::size_t max_restarts = 2000;
  /// Seed of the Lanczos start vector.
  std::uint64_t seed = 0x6c616e637a6f73ULL;
};

struct EigenPairs {
  std::vector<double> values;  ///< ascending
  Eigen::MatrixXd vectors;     ///< column i belongs to values[i]
};

/// k eigenpairs at the requested end of the spectrum, eigenvalues ascending,
/// each with residual ||Mv - lambda v|| <= 1e-8 ||M||. Every eigenvector has
/// unit norm and its largest-magnitude entry positive.
EigenPairs symmetric_eigs(const SymmetricMatrix& m, std::size_t k, SpectrumEnd which,
                          const EigenOptions& options = {});

struct KMeansResult {
  Partition clusters;
  double inertia;
  Eigen::MatrixXd centroids;  ///< k x dims
};

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
  double tolerance = 1e-6;  ///< on the relative inertia change
};

/// k-means++ seeding and Lloyd iterations on the rows of `points`; the best
/// restart by inertia wins. Empty clusters are reseeded with the point
/// farthest from its centroid. Deterministic given the seed.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

struct CommunityEstimate {
  std::size_t count;
  double r;          ///< r_c = sqrt(sum d^2 / sum d - 1)
  bool degenerate;   ///< graph without edges; count = n by convention
};

/// Number of negative eigenvalues of H(r_c), at least 1.
CommunityEstimate estimate_num_communities(const Graph& graph, const EigenOptions& options = {});

/// Bethe-Hessian spectral clustering: the eigenvectors of the K most negative
/// eigenvalues of H(r_c) embed the nodes, k-means groups the rows. Isolated
/// nodes do not take part in centroid fitting and join the nearest centroid.
Partition flat_cluster_bethe_hessian(const Graph& graph, std::uint64_t seed = 0, const EigenOptions& options = {});

/// Splits the nodes by the sign of the eigenvector of the second largest
/// adjacency eigenvalue (>= 0 first). A disconnected graph is split along its
/// connected components instead. Both sides are non-empty; needs >= 2 nodes.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> fiedler_bipartition(
    const Graph& graph, const EigenOptions& options = {});

struct TopDownResult {
  Partition leaf_labels;  ///< leaf index of every node in `tree`
  CommunityTree tree;
  Dendrogram dendrogram;  ///< merges along `tree`, similarity = density across the split
};

/// Recursive bipartitioning. A part becomes a leaf when it has fewer than
/// min_size nodes or its induced subgraph has an estimated community count
/// of at most 1 (or no edges).
TopDownResult top_down_hcd(const Graph& graph, std::size_t min_size = 20, const EigenOptions& options = {});

}  // namespace hcd
