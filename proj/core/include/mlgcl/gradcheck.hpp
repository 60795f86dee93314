// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mlgcl/tensor.hpp"

namespace mlgcl {

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  // Coordinates whose +-h evaluations changed some ReLU's active set.
  std::size_t skipped = 0;
};

struct FiniteDiffOptions {
  double h = 1e-5;
  // Relative error is |a - n| / max(|a|, |n|, denominator_floor). Central
  // differences at h = 1e-5 carry ~1e-10 absolute roundoff for O(1) losses,
  // so entries below the floor are effectively compared in absolute terms.
  double denominator_floor = 1e-5;
  // Applied to the analytic gradients before comparison; lets tests inject
  // a faulty gradient to exercise the failure path.
  std::function<void(std::vector<Matrix>&)> tamper;
};

// f builds a scalar from tape leaves holding `inputs`.
using ScalarFn = std::function<ad::Tensor(ad::Tape&, std::span<const ad::Tensor>)>;

// Compares reverse-mode gradients of f against central differences
// (f(x+h) - f(x-h)) / 2h for every coordinate of every input.
FiniteDiffReport finite_diff_check(const ScalarFn& f, std::span<const Matrix> inputs,
                                   const FiniteDiffOptions& options = {});

FiniteDiffReport finite_diff_check(const std::function<ad::Tensor(ad::Tape&, const ad::Tensor&)>& f,
                                   const Matrix& x, double h);

}  // namespace mlgcl
