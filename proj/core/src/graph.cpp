// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "mlgcl/error.hpp"

namespace mlgcl {

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
  if (rows < 0 || cols < 0) throw ValidationError("sparse matrix dimensions must be nonnegative");
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw ValidationError("sparse entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                            ") out of range for " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!std::isfinite(t.value)) throw ValidationError("sparse entry value is not finite");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    if (i > 0 && triplets[i - 1].row == t.row && triplets[i - 1].col == t.col) {
      m.values_.back() = std::max(m.values_.back(), t.value);
      continue;
    }
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[static_cast<std::size_t>(t.row) + 1];
  }
  for (Index r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_dense(const Matrix& dense, double drop_below) {
  std::vector<Triplet> t;
  for (Index r = 0; r < dense.rows(); ++r) {
    for (Index c = 0; c < dense.cols(); ++c) {
      const double v = dense(r, c);
      if (std::abs(v) > drop_below) t.push_back({r, c, v});
    }
  }
  return from_triplets(dense.rows(), dense.cols(), std::move(t));
}

std::span<const Index> SparseMatrix::row_cols(Index r) const {
  return std::span<const Index>(col_idx_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
}

std::span<const double> SparseMatrix::row_values(Index r) const {
  return std::span<const double>(values_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
}

double SparseMatrix::at(Index r, Index c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

bool SparseMatrix::contains(Index r, Index c) const {
  const auto cols = row_cols(r);
  return std::binary_search(cols.begin(), cols.end(), c);
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (Index r = 0; r < rows_; ++r) {
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out.push_back({r, col_idx_[p], values_[p]});
  }
  return out;
}

Matrix SparseMatrix::to_dense() const {
  Matrix d = Matrix::Zero(rows_, cols_);
  for (Index r = 0; r < rows_; ++r) {
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) d(r, col_idx_[p]) = values_[p];
  }
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  auto t = triplets();
  for (auto& e : t) std::swap(e.row, e.col);
  return from_triplets(cols_, rows_, std::move(t));
}

bool SparseMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  return *this == transpose();
}

void validate_split(const Split& split, Index n) {
  std::unordered_set<Index> seen;
  for (const auto* list : {&split.train, &split.val, &split.test}) {
    for (Index i : *list) {
      if (i < 0 || i >= n) throw ValidationError("split index " + std::to_string(i) + " out of range");
      if (!seen.insert(i).second) throw ValidationError("split lists overlap at node " + std::to_string(i));
    }
  }
}

Graph::Graph(SparseMatrix adjacency, Matrix features, std::optional<std::vector<int>> labels,
             std::optional<Split> split)
    : adjacency_(std::move(adjacency)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      split_(std::move(split)) {
  const Index n = features_.rows();
  if (adjacency_.rows() != n || adjacency_.cols() != n) {
    throw ValidationError("adjacency is " + std::to_string(adjacency_.rows()) + "x" +
                          std::to_string(adjacency_.cols()) + " but features have " + std::to_string(n) +
                          " rows");
  }
  if (!adjacency_.is_symmetric()) throw ValidationError("adjacency is not symmetric");
  for (double v : adjacency_.values()) {
    if (v < 0.0) throw ValidationError("adjacency has a negative weight");
  }
  if (!features_.allFinite()) throw ValidationError("features contain NaN or Inf");
  if (labels_) {
    if (static_cast<Index>(labels_->size()) != n) throw ValidationError("label count does not match node count");
    for (int l : *labels_) {
      if (l < 0) throw ValidationError("negative label");
    }
  }
  if (split_) validate_split(*split_, n);
}

int Graph::num_classes() const {
  if (!labels_ || labels_->empty()) return 0;
  return *std::max_element(labels_->begin(), labels_->end()) + 1;
}

SparseMatrix add_self_loops(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("add_self_loops needs a square matrix");
  auto t = a.triplets();
  std::vector<bool> has_diag(static_cast<std::size_t>(a.rows()), false);
  for (auto& e : t) {
    if (e.row == e.col) {
      e.value += 1.0;
      has_diag[e.row] = true;
    }
  }
  for (Index i = 0; i < a.rows(); ++i) {
    if (!has_diag[i]) t.push_back({i, i, 1.0});
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix sym_normalize(const SparseMatrix& a_hat) {
  if (a_hat.rows() != a_hat.cols()) throw ValidationError("sym_normalize needs a square matrix");
  const Index n = a_hat.rows();
  std::vector<double> inv_sqrt(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    double d = 0.0;
    for (double v : a_hat.row_values(i)) {
      if (v < 0.0) throw ValidationError("sym_normalize needs nonnegative weights");
      d += v;
    }
    if (d <= 0.0) throw ValidationError("zero-degree row " + std::to_string(i) + " (missing self-loops?)");
    inv_sqrt[i] = 1.0 / std::sqrt(d);
  }
  auto t = a_hat.triplets();
  for (auto& e : t) e.value *= inv_sqrt[e.row] * inv_sqrt[e.col];
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

SparseMatrix gcn_normalize(const SparseMatrix& a) { return sym_normalize(add_self_loops(a)); }

void validate_permutation(std::span<const Index> perm, Index n) {
  if (static_cast<Index>(perm.size()) != n) throw ValidationError("permutation has the wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index p : perm) {
    if (p < 0 || p >= n || seen[p]) throw ValidationError("invalid permutation");
    seen[p] = true;
  }
}

std::vector<Index> inverse_permutation(std::span<const Index> perm) {
  std::vector<Index> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<Index>(i);
  return inv;
}

Matrix permute_rows(const Matrix& m, std::span<const Index> perm) {
  validate_permutation(perm, m.rows());
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) out.row(perm[i]) = m.row(i);
  return out;
}

SparseMatrix permute_symmetric(const SparseMatrix& a, std::span<const Index> perm) {
  validate_permutation(perm, a.rows());
  auto t = a.triplets();
  for (auto& e : t) {
    e.row = perm[e.row];
    e.col = perm[e.col];
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

Graph permute_graph(const Graph& g, std::span<const Index> perm) {
  validate_permutation(perm, g.num_nodes());
  std::optional<std::vector<int>> labels;
  if (g.labels()) {
    labels.emplace(g.labels()->size());
    for (std::size_t i = 0; i < g.labels()->size(); ++i) (*labels)[perm[i]] = (*g.labels())[i];
  }
  std::optional<Split> split;
  if (g.split()) {
    split = *g.split();
    for (auto* list : {&split->train, &split->val, &split->test}) {
      for (auto& i : *list) i = perm[i];
    }
  }
  return Graph(permute_symmetric(g.adjacency(), perm), permute_rows(g.features(), perm), std::move(labels),
               std::move(split));
}

}  // namespace mlgcl
