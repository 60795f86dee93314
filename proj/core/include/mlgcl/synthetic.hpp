// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "mlgcl/graph.hpp"

namespace mlgcl {

// Two triangles {0,1,2} and {3,4,5} bridged by edge 2-3, four features,
// labels 0,0,0,1,1,1 and split train {0,3}, val {1,4}, test {2,5}.
Graph toy_graph();

struct LabeledPoints {
  Matrix points;
  std::vector<int> labels;
};

// n_per_class points per class drawn from N(mu_c, I) in `dim` dimensions,
// with mu_0 = 0 and mu_1 = separation * e_0. Rows alternate between classes.
LabeledPoints two_blobs(Index n_per_class, Index dim, double separation, std::uint64_t seed);

// Two disjoint 5-cycles (nodes 0-4 and 5-9). Every node of a group carries the
// same feature row, so any GCN encodes all nodes of a group identically.
Graph two_cluster_graph(Index feature_dim, std::uint64_t seed);

struct CsbmSpec {
  Index nodes = 300;
  int classes = 3;
  double average_degree = 6.0;
  // Fraction of expected edges that join nodes of the same class.
  double homophily = 0.85;
  Index feature_dim = 32;
  // Distance of each class mean from the origin, in noise standard deviations.
  double mean_shift = 1.0;
};

// Contextual stochastic block model: balanced classes, edges drawn per pair,
// Gaussian features around class means. Includes a stratified 10/10/80 split.
Graph csbm(const CsbmSpec& spec, std::uint64_t seed);

}  // namespace mlgcl
