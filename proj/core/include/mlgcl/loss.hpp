// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mlgcl/tensor.hpp"

namespace mlgcl {

struct LossConfig {
  double tau = 0.5;
  // Weight of the graph-level term in the combined objective.
  double lambda = 1.0;
  // Count the positive pair once per negative in the denominator, as the
  // formula is printed, instead of once (NT-Xent).
  bool literal_denominator = false;

  void validate() const;
};

// Node-level InfoNCE between two views whose rows are l2-normalized. For
// anchor i of view a the positive is row i of view b and the negatives are
// all other rows of both views; view b is anchored the same way. Returns the
// mean log-probability over all 2N anchors (<= 0, to be maximized).
ad::Tensor node_contrastive_loss(const ad::Tensor& za, const ad::Tensor& zb, double tau,
                                 bool literal_denominator = false);

// Graph-level contrast between the summaries of two views (s_a, s_b) with the
// summaries of the shuffled-feature encodings (t_a, t_b) as negatives. Sum of
// the a-anchored and b-anchored log-probabilities (<= 0, to be maximized).
ad::Tensor graph_contrastive_loss(const ad::Tensor& sa, const ad::Tensor& sb, const ad::Tensor& ta,
                                  const ad::Tensor& tb, double tau);

struct LossReport {
  double total = 0.0;
  double node_term = 0.0;
  double graph_term = 0.0;
};

struct Objective {
  // node + lambda * graph; training minimizes its negation.
  ad::Tensor value;
  LossReport report;
};

Objective multi_level_loss(const ad::Tensor& node_term, const ad::Tensor& graph_term, double lambda);

}  // namespace mlgcl
