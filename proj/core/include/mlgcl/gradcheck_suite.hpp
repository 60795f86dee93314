// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlgcl/gradcheck.hpp"

namespace mlgcl {

inline constexpr double kGradcheckTolerance = 1e-4;

struct GradcheckCase {
  std::string name;
  ScalarFn fn;
  std::vector<Matrix> inputs;
};

// One case per differentiable op, the loss terms, the encoder, and the full
// training objective on the toy graph. Inputs are drawn from `seed`.
std::vector<GradcheckCase> gradcheck_suite(std::uint64_t seed = 0);

struct GradcheckResult {
  std::string name;
  FiniteDiffReport report;
  bool passed = false;
};

// Runs every case with h = 1e-5. When `faulty_case` names a case, its first
// analytic gradient entry is perturbed before comparison.
std::vector<GradcheckResult> run_gradcheck(const std::vector<GradcheckCase>& cases,
                                           const std::string& faulty_case = {});

}  // namespace mlgcl
