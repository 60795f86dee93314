// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "mlgcl/error.hpp"
#include "mlgcl/optim.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {
namespace {

TEST(Xavier, EntriesWithinBound) {
  const Matrix w = xavier_init(30, 50, 1);
  const double bound = std::sqrt(6.0 / 80.0);
  EXPECT_DOUBLE_EQ(xavier_bound(30, 50), bound);
  EXPECT_LE(w.cwiseAbs().maxCoeff(), bound);
}

TEST(Xavier, DeterministicPerSeed) {
  EXPECT_EQ(xavier_init(7, 9, 42), xavier_init(7, 9, 42));
  EXPECT_NE(xavier_init(7, 9, 42), xavier_init(7, 9, 43));
}

TEST(Xavier, LargeMatrixIsCentered) {
  const Matrix w = xavier_init(512, 512, 3);
  EXPECT_LT(std::abs(w.mean()), 0.01);
  // Uniform(-b, b) has variance b^2 / 3.
  const double b = xavier_bound(512, 512);
  EXPECT_NEAR(w.squaredNorm() / static_cast<double>(w.size()), b * b / 3.0, 0.02 * b * b);
}

TEST(Xavier, ZeroDimensionIsRejected) {
  EXPECT_THROW(xavier_init(0, 3, 1), ValidationError);
  EXPECT_THROW(xavier_init(3, 0, 1), ValidationError);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  Matrix p = Matrix::Constant(2, 3, 1.25);
  const Matrix before = p;
  std::vector<Matrix*> params{&p};
  AdamState st(AdamConfig{}, std::vector<const Matrix*>{&p});
  for (int i = 0; i < 5; ++i) adam_step(params, std::vector<Matrix>{Matrix::Zero(2, 3)}, st);
  EXPECT_EQ(p, before);
  EXPECT_EQ(st.step, 5);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Matrix p = Matrix::Constant(1, 1, 1.0);
  std::vector<Matrix*> params{&p};
  AdamState st(AdamConfig{.lr = 0.001}, std::vector<const Matrix*>{&p});
  adam_step(params, std::vector<Matrix>{Matrix::Constant(1, 1, 1.0)}, st);
  EXPECT_NEAR(p(0, 0), 0.999, 1e-10);
}

TEST(Adam, ShapeMismatchIsRejected) {
  Matrix p = Matrix::Zero(2, 2);
  std::vector<Matrix*> params{&p};
  AdamState st(AdamConfig{}, std::vector<const Matrix*>{&p});
  EXPECT_THROW(adam_step(params, std::vector<Matrix>{Matrix::Zero(2, 3)}, st), ComputeError);
  EXPECT_THROW(adam_step(params, std::vector<Matrix>{}, st), ComputeError);
}

TEST(Adam, IdenticalParametersGetIdenticalUpdates) {
  Rng rng(4);
  Matrix a(3, 3);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  Matrix b = a;
  std::vector<Matrix*> params{&a, &b};
  AdamState st(AdamConfig{.weight_decay = 1e-3}, std::vector<const Matrix*>{&a, &b});
  for (int i = 0; i < 10; ++i) {
    const Matrix g = a.array().sin().matrix();
    adam_step(params, std::vector<Matrix>{g, g}, st);
  }
  EXPECT_EQ(a, b);
}

TEST(Rng, DeriveSeedSeparatesStreams) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}

TEST(Rng, PermutationIsValid) {
  auto p = Rng(8).permutation(100);
  std::sort(p.begin(), p.end());
  for (Index i = 0; i < 100; ++i) EXPECT_EQ(p[i], i);
}

}  // namespace
}  // namespace mlgcl
