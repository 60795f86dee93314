// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mlgcl/graph.hpp"

namespace mlgcl {

enum class SimilarityKind { cosine, mahalanobis, gaussian };

std::string_view to_string(SimilarityKind kind);
SimilarityKind parse_similarity_kind(std::string_view s);

// Dense N x N pairwise scores. For mahalanobis the values are distances and
// smaller means closer; the other kinds are similarities.
struct SimilarityMatrix {
  Matrix values;
  SimilarityKind kind = SimilarityKind::cosine;

  bool larger_is_closer() const { return kind != SimilarityKind::mahalanobis; }
};

// S_ij = z_i.z_j / (|z_i||z_j|). A zero row scores 0 against others and 1
// against itself.
SimilarityMatrix cosine_similarity_matrix(const Matrix& z);

// D_ij = sqrt((z_i - z_j)^T M (z_i - z_j)). M must be symmetric within 1e-9
// and positive semidefinite; a 1e-8 diagonal jitter is tried before giving up.
SimilarityMatrix mahalanobis_distance_matrix(const Matrix& z, const Matrix& metric);

// (Cov(Z) + reg * I)^{-1}, the default Mahalanobis metric.
Matrix inverse_covariance_metric(const Matrix& z, double reg = 1e-3);

// S_ij = exp(-|z_i - z_j|^2 / (2 sigma^2)).
SimilarityMatrix gaussian_kernel_matrix(const Matrix& z, double sigma);

// Median of |z_i - z_j| over i < j; 1.0 when that median is 0 or N < 2.
double median_pairwise_distance(const Matrix& z);

// Keeps, for each node, the k closest other nodes (ties to the lower index),
// then symmetrizes by union. Unit weights, no self-loops.
SparseMatrix knn_graph(const SimilarityMatrix& s, Index k);

// Drops each undirected edge independently with probability p.
SparseMatrix edge_perturbation(const SparseMatrix& a, double p, std::uint64_t seed);

enum class MaskMode { column, cell };

std::string_view to_string(MaskMode mode);
MaskMode parse_mask_mode(std::string_view s);

// Zeroes feature columns (or single cells) chosen independently with probability p.
Matrix attribute_masking(const Matrix& x, double p, std::uint64_t seed, MaskMode mode = MaskMode::column);

// Rows of x moved by a uniformly random permutation: out.row(perm[i]) = x.row(i).
Matrix row_shuffle(const Matrix& x, std::uint64_t seed);
std::vector<Index> shuffle_permutation(Index n, std::uint64_t seed);

enum class AugmentScheme { knn, edge_perturbation, attribute_masking, identity };

std::string_view to_string(AugmentScheme scheme);
AugmentScheme parse_augment_scheme(std::string_view s);

struct AugmentationSpec {
  AugmentScheme scheme = AugmentScheme::knn;
  Index k = 10;
  SimilarityKind similarity = SimilarityKind::cosine;
  // Edge-drop or mask probability for the perturbation schemes.
  double p = 0.2;
  // Gaussian kernel width; empty means the median heuristic.
  std::optional<double> sigma;
  MaskMode mask_mode = MaskMode::column;
  std::uint64_t seed = 0;

  // Throws ValidationError on out-of-range fields.
  void validate() const;
};

// Similarity of the requested kind with the default metric/width choices.
SimilarityMatrix similarity_matrix(const Matrix& z, const AugmentationSpec& spec);

}  // namespace mlgcl
