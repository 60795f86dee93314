// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlgcl/graph.hpp"

namespace mlgcl {

// Glorot/Xavier uniform: U(-b, b) with b = sqrt(6 / (rows + cols)), treating
// rows as fan-in and cols as fan-out. Deterministic per seed.
Matrix xavier_init(Index rows, Index cols, std::uint64_t seed);
double xavier_bound(Index rows, Index cols);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Coupled L2 penalty: wd * param is added to the gradient before the moments.
  double weight_decay = 0.0;
};

struct AdamState {
  AdamConfig config;
  std::int64_t step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;

  AdamState() = default;
  AdamState(AdamConfig cfg, std::span<const Matrix* const> params);
};

// One bias-corrected Adam update. The step counter is incremented first.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state);

}  // namespace mlgcl
