#include <algorithm>
#include <cmath>
#include <tuple>

#include "hcd/spectral.hpp"

namespace hcd {

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<Entry> entries) : n_(n) {
  for (auto& e : entries) {
    if (e.row >= n || e.col >= n) throw ValidationError("matrix entry out of range");
    if (e.row > e.col) std::swap(e.row, e.col);
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return std::tie(x.row, x.col) < std::tie(y.row, y.col); });
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    const auto row = entries[i].row, col = entries[i].col;
    double value = 0.0;
    for (; i < entries.size() && entries[i].row == row && entries[i].col == col; ++i) value += entries[i].value;
    cols_.push_back(col);
    values_.push_back(value);
    ++offsets_[row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
}

SymmetricMatrix SymmetricMatrix::from_dense(const Eigen::MatrixXd& dense) {
  if (dense.rows() != dense.cols()) throw ValidationError("matrix must be square");
  const auto n = static_cast<std::size_t>(dense.rows());
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) entries.push_back({i, j, v});
    }
  return SymmetricMatrix(n, std::move(entries));
}

void SymmetricMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    const double xi = x[i];
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      const auto j = cols_[e];
      acc += values_[e] * x[j];
      if (j != i) y[j] += values_[e] * xi;
    }
    y[i] += acc;
  }
}

Eigen::MatrixXd SymmetricMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(cols_[e]);
      dense(r, c) = dense(c, r) = values_[e];
    }
  return dense;
}

double SymmetricMatrix::norm_bound() const {
  std::vector<double> sums(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      sums[i] += std::abs(values_[e]);
      if (cols_[e] != i) sums[cols_[e]] += std::abs(values_[e]);
    }
  return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
}

SymmetricMatrix bethe_hessian(const Graph& graph, double r) {
  const auto n = graph.node_count();
  std::vector<SymmetricMatrix::Entry> entries;
  entries.reserve(n + graph.edge_count());
  for (std::size_t i = 0; i < n; ++i)
    entries.push_back({i, i, r * r - 1.0 + static_cast<double>(graph.degree(i))});
  for (const auto& e : graph.edges()) entries.push_back({e.u, e.v, -r});
  return SymmetricMatrix(n, std::move(entries));
}

SymmetricMatrix adjacency_matrix(const Graph& graph) {
  std::vector<SymmetricMatrix::Entry> entries;
  entries.reserve(graph.edge_count());
  for (const auto& e : graph.edges()) entries.push_back({e.u, e.v, 1.0});
  return SymmetricMatrix(graph.node_count(), std::move(entries));
}

}  // namespace hcd
