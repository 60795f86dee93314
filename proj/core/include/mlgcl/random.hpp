// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mlgcl/graph.hpp"

namespace mlgcl {

// Seed mixing so that (seed, stream) pairs give unrelated generators.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// mt19937_64 with distribution code written out, so draws are identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  double normal();

  // Uniformly random permutation of [0, n) (Fisher-Yates).
  std::vector<Index> permutation(Index n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mlgcl
