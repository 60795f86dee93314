// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mlgcl {

using Index = std::int64_t;

// Row-major dense matrix; rows are nodes throughout the library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed sparse row matrix. Entries within a row are sorted by column and
// unique, so the CSR arrays are the canonical (row, col) ordering.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols);

  // Sorts the triplets; duplicate (row, col) pairs keep the maximum value.
  static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const Matrix& dense, double drop_below = 0.0);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_cols(Index r) const;
  std::span<const double> row_values(Index r) const;

  // Value at (r, c), 0 when absent. Binary search within the row.
  double at(Index r, Index c) const;
  bool contains(Index r, Index c) const;

  std::vector<Triplet> triplets() const;
  Matrix to_dense() const;
  SparseMatrix transpose() const;
  bool is_symmetric() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

struct Split {
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;

  friend bool operator==(const Split&, const Split&) = default;
};

// Throws ValidationError when the lists overlap or hold indices outside [0, n).
void validate_split(const Split& split, Index n);

// Undirected attributed graph. The constructor validates all invariants.
class Graph {
 public:
  Graph(SparseMatrix adjacency, Matrix features, std::optional<std::vector<int>> labels = {},
        std::optional<Split> split = {});

  Index num_nodes() const { return features_.rows(); }
  Index num_features() const { return features_.cols(); }
  int num_classes() const;

  const SparseMatrix& adjacency() const { return adjacency_; }
  const Matrix& features() const { return features_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  const std::optional<Split>& split() const { return split_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  SparseMatrix adjacency_;
  Matrix features_;
  std::optional<std::vector<int>> labels_;
  std::optional<Split> split_;
};

// A + I. Existing diagonal entries are incremented.
SparseMatrix add_self_loops(const SparseMatrix& a);

// D^{-1/2} A D^{-1/2} with D the row sums of A.
SparseMatrix sym_normalize(const SparseMatrix& a_hat);

// Convenience for the GCN propagation operator: sym_normalize(add_self_loops(a)).
SparseMatrix gcn_normalize(const SparseMatrix& a);

// Node i of the input becomes node perm[i] of the output.
Graph permute_graph(const Graph& g, std::span<const Index> perm);
Matrix permute_rows(const Matrix& m, std::span<const Index> perm);
SparseMatrix permute_symmetric(const SparseMatrix& a, std::span<const Index> perm);
std::vector<Index> inverse_permutation(std::span<const Index> perm);
void validate_permutation(std::span<const Index> perm, Index n);

}  // namespace mlgcl
