// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/synthetic.hpp"

#include "mlgcl/error.hpp"
#include "mlgcl/eval.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {
namespace {

SparseMatrix undirected(Index n, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<Triplet> t;
  for (const auto& [u, v] : edges) {
    t.push_back({u, v, 1.0});
    t.push_back({v, u, 1.0});
  }
  return SparseMatrix::from_triplets(n, n, t);
}

}  // namespace

Graph toy_graph() {
  Matrix x(6, 4);
  x << 1.0, 0.2, 0.0, 0.5,
       0.9, 0.1, 0.3, 0.0,
       0.8, 0.4, 0.1, 0.2,
       0.1, 1.0, 0.7, 0.0,
       0.0, 0.8, 0.9, 0.3,
       0.2, 0.9, 0.6, 0.1;
  auto a = undirected(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
  return Graph(std::move(a), std::move(x), std::vector<int>{0, 0, 0, 1, 1, 1}, Split{{0, 3}, {1, 4}, {2, 5}});
}

LabeledPoints two_blobs(Index n_per_class, Index dim, double separation, std::uint64_t seed) {
  if (n_per_class < 1 || dim < 1) throw ValidationError("two_blobs needs n_per_class >= 1 and dim >= 1");
  Rng rng(seed);
  LabeledPoints out{Matrix(2 * n_per_class, dim), {}};
  for (Index i = 0; i < 2 * n_per_class; ++i) {
    const int c = static_cast<int>(i % 2);
    for (Index j = 0; j < dim; ++j) out.points(i, j) = rng.normal();
    if (c == 1) out.points(i, 0) += separation;
    out.labels.push_back(c);
  }
  return out;
}

Graph two_cluster_graph(Index feature_dim, std::uint64_t seed) {
  if (feature_dim < 1) throw ValidationError("two_cluster_graph needs feature_dim >= 1");
  Rng rng(seed);
  Matrix group(2, feature_dim);
  for (Index g = 0; g < 2; ++g) {
    for (Index j = 0; j < feature_dim; ++j) group(g, j) = rng.uniform();
  }
  Matrix x(10, feature_dim);
  std::vector<std::pair<Index, Index>> edges;
  std::vector<int> labels;
  for (Index i = 0; i < 10; ++i) {
    const Index g = i / 5;
    x.row(i) = group.row(g);
    labels.push_back(static_cast<int>(g));
    edges.emplace_back(i, g * 5 + (i + 1) % 5);
  }
  return Graph(undirected(10, edges), std::move(x), std::move(labels));
}

Graph csbm(const CsbmSpec& spec, std::uint64_t seed) {
  if (spec.nodes < 2 || spec.classes < 2 || spec.nodes < spec.classes) {
    throw ValidationError("csbm needs nodes >= classes >= 2");
  }
  if (!(spec.homophily >= 0.0 && spec.homophily <= 1.0)) throw ValidationError("csbm homophily must be in [0, 1]");
  Rng rng(seed);
  const Index n = spec.nodes;
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i % spec.classes);

  // Expected same-class and cross-class pair counts fix the two edge probabilities.
  const double c = spec.classes;
  const double per_class = static_cast<double>(n) / c;
  const double same_pairs = c * per_class * (per_class - 1.0) / 2.0;
  const double all_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double expected_edges = spec.average_degree * static_cast<double>(n) / 2.0;
  const double p_in = std::min(1.0, spec.homophily * expected_edges / same_pairs);
  const double p_out = std::min(1.0, (1.0 - spec.homophily) * expected_edges / (all_pairs - same_pairs));

  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const bool same = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)];
      if (rng.bernoulli(same ? p_in : p_out)) edges.emplace_back(i, j);
    }
  }

  Matrix means(spec.classes, spec.feature_dim);
  for (int k = 0; k < spec.classes; ++k) {
    for (Index j = 0; j < spec.feature_dim; ++j) means(k, j) = rng.normal();
    means.row(k) *= spec.mean_shift / std::max(means.row(k).norm(), 1e-12);
  }
  Matrix x(n, spec.feature_dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < spec.feature_dim; ++j) x(i, j) = rng.normal();
    x.row(i) += means.row(labels[static_cast<std::size_t>(i)]);
  }
  auto split = stratified_split(labels, derive_seed(seed, 1));
  return Graph(undirected(n, edges), std::move(x), std::move(labels), std::move(split));
}

}  // namespace mlgcl
