#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hcd/random.hpp"
#include "hcd/simd/kernels.hpp"
#include "hcd/spectral.hpp"

namespace hcd {

namespace {

constexpr double kResidualTolerance = 1e-8;

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

EigenPairs dense_eigs(const SymmetricMatrix& m, std::size_t k, SpectrumEnd which) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.to_dense());
  const auto n = static_cast<Eigen::Index>(m.dimension());
  const auto count = static_cast<Eigen::Index>(k);
  const Eigen::Index start = which == SpectrumEnd::smallest ? 0 : n - count;
  EigenPairs out;
  out.values.resize(k);
  for (Eigen::Index i = 0; i < count; ++i) out.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(start + i);
  out.vectors = solver.eigenvectors().middleCols(start, count);
  fix_signs(out.vectors);
  return out;
}

// Lanczos basis stored column-major: column j is the j-th basis vector.
class Basis {
 public:
  Basis(std::size_t n, std::size_t columns) : n_(n), data_(n * columns, 0.0) {}
  std::span<double> col(std::size_t j) { return {data_.data() + j * n_, n_}; }
  Eigen::Map<Eigen::MatrixXd> matrix(std::size_t columns) {
    return {data_.data(), static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(columns)};
  }

  // Two passes of classical Gram-Schmidt of w against columns 0..last;
  // accumulates the projection coefficients into h.
  void orthogonalize(std::span<double> w, std::size_t last, std::span<double> h) {
    std::vector<double> pass(last + 1);
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (std::size_t i = 0; i <= last; ++i) pass[i] = simd::dot(col(i), w);
      for (std::size_t i = 0; i <= last; ++i) {
        simd::axpy(-pass[i], col(i), w);
        h[i] += pass[i];
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

void random_unit(std::span<double> v, Rng& rng) {
  for (auto& x : v) x = uniform01(rng) - 0.5;
  simd::scale(1.0 / std::sqrt(simd::dot(v, v)), v);
}

// Thick-restart Lanczos with full reorthogonalization. After a restart the
// first `kept` columns hold Ritz vectors and column `kept` the old residual
// direction; the projected matrix then has an arrowhead block, whose
// off-diagonal entries fall out of the Gram-Schmidt coefficients.
EigenPairs lanczos(const SymmetricMatrix& m, std::size_t k, SpectrumEnd which, const EigenOptions& options) {
  const auto n = m.dimension();
  const auto width = std::min(n - 1, std::max(2 * k + 16, k + 32));
  if (width <= k + 1) return dense_eigs(m, k, which);

  Basis basis(n, width + 1);
  Rng rng = make_rng(options.seed, 0);
  random_unit(basis.col(0), rng);
  const double scale_hint = std::max(m.norm_bound(), std::numeric_limits<double>::min());

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(width));
  std::vector<double> w(n), h(width + 1);
  std::size_t kept = 0;
  double worst = std::numeric_limits<double>::infinity();

  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    double beta = 0.0;
    for (std::size_t j = kept; j < width; ++j) {
      m.multiply(basis.col(j), w);
      std::fill(h.begin(), h.end(), 0.0);
      basis.orthogonalize(w, j, h);
      for (std::size_t i = 0; i <= j; ++i) t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h[i];
      beta = std::sqrt(simd::dot(w, w));
      auto next = basis.col(j + 1);
      if (beta <= 1e-12 * scale_hint) {
        // Invariant subspace: continue from a fresh orthogonal direction.
        beta = 0.0;
        random_unit(next, rng);
        std::vector<double> ignored(j + 1);
        basis.orthogonalize(next, j, ignored);
        simd::scale(1.0 / std::sqrt(simd::dot(next, next)), next);
      } else {
        std::copy(w.begin(), w.end(), next.begin());
        simd::scale(1.0 / beta, next);
      }
    }

    const Eigen::MatrixXd projected = t.selfadjointView<Eigen::Upper>();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected);
    const auto& theta = ritz.eigenvalues();
    const auto& s = ritz.eigenvectors();
    const auto last = static_cast<Eigen::Index>(width) - 1;
    const double norm = std::max(std::abs(theta(0)), std::abs(theta(last)));
    const auto first_wanted = [&](std::size_t count) {
      return which == SpectrumEnd::smallest ? Eigen::Index{0} : static_cast<Eigen::Index>(width - count);
    };

    worst = 0.0;
    for (Eigen::Index i = first_wanted(k); i < first_wanted(k) + static_cast<Eigen::Index>(k); ++i)
      worst = std::max(worst, std::abs(beta * s(last, i)));
    if (worst <= kResidualTolerance * norm) {
      EigenPairs out;
      const auto start = first_wanted(k);
      for (std::size_t i = 0; i < k; ++i) out.values.push_back(theta(start + static_cast<Eigen::Index>(i)));
      out.vectors = basis.matrix(width) * s.middleCols(start, static_cast<Eigen::Index>(k));
      for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) out.vectors.col(c).normalize();
      fix_signs(out.vectors);
      return out;
    }

    kept = std::min(width - 1, k + (width - k) / 2);
    const auto start = first_wanted(kept);
    const Eigen::MatrixXd ritz_vectors = basis.matrix(width) * s.middleCols(start, static_cast<Eigen::Index>(kept));
    auto v = basis.matrix(width + 1);
    v.leftCols(static_cast<Eigen::Index>(kept)) = ritz_vectors;
    v.col(static_cast<Eigen::Index>(kept)) = v.col(static_cast<Eigen::Index>(width));
    t.setZero();
    for (std::size_t i = 0; i < kept; ++i)
      t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = theta(start + static_cast<Eigen::Index>(i));
  }
  throw ConvergenceError("Lanczos did not converge; worst residual " + std::to_string(worst), worst);
}

}  // namespace

EigenPairs symmetric_eigs(const SymmetricMatrix& m, std::size_t k, SpectrumEnd which, const EigenOptions& options) {
  if (k < 1 || k > m.dimension()) throw ValidationError("eigenpair count must lie in [1, n]");
  if (m.dimension() <= options.dense_threshold) return dense_eigs(m, k, which);
  return lanczos(m, k, which, options);
}

}  // namespace hcd
