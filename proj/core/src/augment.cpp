// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "mlgcl/error.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {
namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(what) + ": p must be in [0, 1]");
}

// Pairwise Euclidean distances computed per pair so identical rows give exactly 0.
Matrix pairwise_sq_distances(const Matrix& y) {
  const Index n = y.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = (y.row(i) - y.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

}  // namespace

std::string_view to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::cosine:
      return "cosine";
    case SimilarityKind::mahalanobis:
      return "mahalanobis";
    case SimilarityKind::gaussian:
      return "gaussian";
  }
  return "?";
}

SimilarityKind parse_similarity_kind(std::string_view s) {
  if (s == "cosine") return SimilarityKind::cosine;
  if (s == "mahalanobis") return SimilarityKind::mahalanobis;
  if (s == "gaussian") return SimilarityKind::gaussian;
  throw ValidationError("unknown similarity '" + std::string(s) + "' (cosine|mahalanobis|gaussian)");
}

std::string_view to_string(AugmentScheme scheme) {
  switch (scheme) {
    case AugmentScheme::knn:
      return "knn";
    case AugmentScheme::edge_perturbation:
      return "edge_perturbation";
    case AugmentScheme::attribute_masking:
      return "attribute_masking";
    case AugmentScheme::identity:
      return "identity";
  }
  return "?";
}

AugmentScheme parse_augment_scheme(std::string_view s) {
  if (s == "knn") return AugmentScheme::knn;
  if (s == "edge_perturbation" || s == "edge") return AugmentScheme::edge_perturbation;
  if (s == "attribute_masking" || s == "mask") return AugmentScheme::attribute_masking;
  if (s == "identity") return AugmentScheme::identity;
  throw ValidationError("unknown augmentation scheme '" + std::string(s) +
                        "' (knn|edge_perturbation|attribute_masking|identity)");
}

SimilarityMatrix cosine_similarity_matrix(const Matrix& z) {
  if (z.rows() < 1) throw ValidationError("cosine_similarity_matrix needs at least one row");
  Eigen::VectorXd norms = z.rowwise().norm();
  Matrix u = z;
  for (Index i = 0; i < z.rows(); ++i) {
    if (norms(i) > 0.0) u.row(i) /= norms(i);
  }
  SimilarityMatrix s{Matrix(z.rows(), z.rows()), SimilarityKind::cosine};
  s.values.noalias() = u * u.transpose();
  s.values = (0.5 * (s.values + s.values.transpose())).cwiseMax(-1.0).cwiseMin(1.0);
  s.values.diagonal().setOnes();
  return s;
}

SimilarityMatrix mahalanobis_distance_matrix(const Matrix& z, const Matrix& metric) {
  const Index d = z.cols();
  if (metric.rows() != d || metric.cols() != d) throw ValidationError("Mahalanobis metric has the wrong shape");
  if (!metric.allFinite()) throw ComputeError("Mahalanobis metric is not finite");
  if ((metric - metric.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ComputeError("Mahalanobis metric is not symmetric");
  }
  Eigen::MatrixXd m = metric;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    m.diagonal().array() += 1e-8;
    llt.compute(m);
    if (llt.info() != Eigen::Success) throw ComputeError("Mahalanobis metric is not positive semidefinite");
  }
  // (z_i - z_j)^T L L^T (z_i - z_j) = |L^T (z_i - z_j)|^2
  const Matrix y = z * Eigen::MatrixXd(llt.matrixL());
  SimilarityMatrix s{pairwise_sq_distances(y).cwiseSqrt(), SimilarityKind::mahalanobis};
  return s;
}

Matrix inverse_covariance_metric(const Matrix& z, double reg) {
  if (z.rows() < 1) throw ValidationError("covariance of an empty matrix");
  const Eigen::RowVectorXd mu = z.colwise().mean();
  const Matrix c = z.rowwise() - mu;
  Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(z.rows());
  cov.diagonal().array() += reg;
  Eigen::MatrixXd inv = cov.ldlt().solve(Eigen::MatrixXd::Identity(z.cols(), z.cols()));
  return 0.5 * (inv + inv.transpose());
}

SimilarityMatrix gaussian_kernel_matrix(const Matrix& z, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian kernel width must be positive");
  const double denom = 2.0 * sigma * sigma;
  SimilarityMatrix s{(-pairwise_sq_distances(z).array() / denom).exp().matrix(), SimilarityKind::gaussian};
  return s;
}

double median_pairwise_distance(const Matrix& z) {
  const Index n = z.rows();
  if (n < 2) return 1.0;
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) d.push_back((z.row(i) - z.row(j)).norm());
  }
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double med = *mid;
  if (d.size() % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), mid));
  return med > 0.0 ? med : 1.0;
}

SparseMatrix knn_graph(const SimilarityMatrix& s, Index k) {
  const Index n = s.values.rows();
  if (s.values.cols() != n) throw ValidationError("similarity matrix must be square");
  if (k < 1 || k > n - 1) {
    throw ValidationError("k = " + std::to_string(k) + " out of range [1, " + std::to_string(n - 1) + "]");
  }
  if (!s.values.allFinite()) throw ComputeError("similarity matrix has NaN or Inf");
  const bool larger = s.larger_is_closer();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * n * k));
  std::vector<Index> cand(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) cand[c++] = j;
    }
    const auto row = s.values.row(i);
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end(), [&](Index a, Index b) {
      if (row(a) != row(b)) return larger ? row(a) > row(b) : row(a) < row(b);
      return a < b;
    });
    for (Index q = 0; q < k; ++q) {
      t.push_back({i, cand[q], 1.0});
      t.push_back({cand[q], i, 1.0});
    }
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

SparseMatrix edge_perturbation(const SparseMatrix& a, double p, std::uint64_t seed) {
  require_probability(p, "edge_perturbation");
  if (a.rows() != a.cols()) throw ValidationError("edge_perturbation needs a square adjacency");
  Rng rng(seed);
  std::vector<Triplet> kept;
  for (const auto& e : a.triplets()) {
    if (e.row > e.col) continue;
    if (rng.bernoulli(p)) continue;
    kept.push_back(e);
    if (e.row != e.col) kept.push_back({e.col, e.row, a.at(e.col, e.row)});
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(kept));
}

std::string_view to_string(MaskMode mode) { return mode == MaskMode::column ? "column" : "cell"; }

MaskMode parse_mask_mode(std::string_view s) {
  if (s == "column") return MaskMode::column;
  if (s == "cell") return MaskMode::cell;
  throw ValidationError("unknown mask mode '" + std::string(s) + "' (column|cell)");
}

Matrix attribute_masking(const Matrix& x, double p, std::uint64_t seed, MaskMode mode) {
  require_probability(p, "attribute_masking");
  Rng rng(seed);
  Matrix out = x;
  if (mode == MaskMode::column) {
    for (Index c = 0; c < x.cols(); ++c) {
      if (rng.bernoulli(p)) out.col(c).setZero();
    }
  } else {
    for (Index i = 0; i < out.size(); ++i) {
      if (rng.bernoulli(p)) out.data()[i] = 0.0;
    }
  }
  return out;
}

std::vector<Index> shuffle_permutation(Index n, std::uint64_t seed) { return Rng(seed).permutation(n); }

Matrix row_shuffle(const Matrix& x, std::uint64_t seed) {
  if (x.rows() < 1) throw ValidationError("row_shuffle needs at least one row");
  return permute_rows(x, shuffle_permutation(x.rows(), seed));
}

void AugmentationSpec::validate() const {
  if (scheme == AugmentScheme::knn && k < 1) throw ValidationError("aug.k must be >= 1");
  require_probability(p, "augmentation");
  if (sigma && !(*sigma > 0.0)) throw ValidationError("aug.sigma must be positive");
}

SimilarityMatrix similarity_matrix(const Matrix& z, const AugmentationSpec& spec) {
  switch (spec.similarity) {
    case SimilarityKind::cosine:
      return cosine_similarity_matrix(z);
    case SimilarityKind::mahalanobis:
      return mahalanobis_distance_matrix(z, inverse_covariance_metric(z));
    case SimilarityKind::gaussian:
      return gaussian_kernel_matrix(z, spec.sigma ? *spec.sigma : median_pairwise_distance(z));
  }
  throw ValidationError("unknown similarity kind");
}

}  // namespace mlgcl
