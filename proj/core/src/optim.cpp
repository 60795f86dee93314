// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/optim.hpp"

#include <cmath>
#include <string>

#include "mlgcl/error.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {

double xavier_bound(Index rows, Index cols) {
  return std::sqrt(6.0 / static_cast<double>(rows + cols));
}

Matrix xavier_init(Index rows, Index cols, std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) throw ValidationError("xavier_init needs positive dimensions");
  const double b = xavier_bound(rows, cols);
  Rng rng(seed);
  Matrix w(rows, cols);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-b, b);
  return w;
}

AdamState::AdamState(AdamConfig cfg, std::span<const Matrix* const> params) : config(cfg) {
  m.reserve(params.size());
  v.reserve(params.size());
  for (const Matrix* p : params) {
    m.push_back(Matrix::Zero(p->rows(), p->cols()));
    v.push_back(Matrix::Zero(p->rows(), p->cols()));
  }
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw ComputeError("adam_step: " + std::to_string(params.size()) + " params, " + std::to_string(grads.size()) +
                       " grads, " + std::to_string(state.m.size()) + " moment slots");
  }
  const auto& c = state.config;
  ++state.step;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    if (grads[i].rows() != p.rows() || grads[i].cols() != p.cols() || state.m[i].rows() != p.rows() ||
        state.m[i].cols() != p.cols()) {
      throw ComputeError("adam_step: shape mismatch for parameter " + std::to_string(i));
    }
    Matrix g = grads[i];
    if (c.weight_decay != 0.0) g += c.weight_decay * p;
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g.cwiseAbs2();
    p.array() -= c.lr * (state.m[i].array() / bc1) / ((state.v[i].array() / bc2).sqrt() + c.eps);
  }
}

}  // namespace mlgcl
