// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "mlgcl/error.hpp"
#include "mlgcl/model.hpp"
#include "mlgcl/pipeline.hpp"
#include "mlgcl/random.hpp"
#include "mlgcl/synthetic.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace mlgcl {
namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

TEST(GcnLayer, IdentityPath) {
  ad::Tape tape;
  const Matrix z = oracle::random_matrix(4, 4, 1, 0.0, 2.0);
  const auto a = std::make_shared<const SparseMatrix>(SparseMatrix::identity(4));
  const auto y = gcn_layer(a, tape.constant(z), tape.constant(Matrix::Identity(4, 4)), Activation::relu);
  EXPECT_EQ(y.value(), z);
}

TEST(GcnLayer, TwoNodeAveraging) {
  ad::Tape tape;
  const auto a = std::make_shared<const SparseMatrix>(
      SparseMatrix::from_triplets(2, 2, {{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 0.5}, {1, 1, 0.5}}));
  Matrix z(2, 2);
  z << 2, 0, 0, 2;
  const auto y = gcn_layer(a, tape.constant(z), tape.constant(Matrix::Identity(2, 2)), Activation::relu);
  EXPECT_EQ(y.value(), Matrix(Matrix::Ones(2, 2)));
}

TEST(GcnLayer, ShapeMismatch) {
  ad::Tape tape;
  const auto a = std::make_shared<const SparseMatrix>(SparseMatrix::identity(3));
  EXPECT_THROW(gcn_layer(a, tape.constant(Matrix::Ones(3, 2)), tape.constant(Matrix::Ones(3, 2)), Activation::relu),
               ComputeError);
  EXPECT_THROW(gcn_layer(a, tape.constant(Matrix::Ones(2, 2)), tape.constant(Matrix::Ones(2, 2)), Activation::relu),
               ComputeError);
}

TEST(Encode, ZeroFeaturesGiveZeroOutput) {
  const auto g = toy_graph();
  const auto v = make_view(std::make_shared<const SparseMatrix>(gcn_normalize(g.adjacency())), Matrix::Zero(6, 4));
  const auto params = EncoderParams::init(4, 8, 2, Activation::relu, 3);
  EXPECT_TRUE(encode(v, params).isZero(0.0));
}

TEST(Encode, DimensionMismatch) {
  const auto v = topology_view(toy_graph());
  EXPECT_THROW(encode(v, EncoderParams::init(5, 8, 2, Activation::relu, 3)), ComputeError);
}

TEST(Encode, SparseAndDenseFeaturePathsAgree) {
  const auto g = csbm(CsbmSpec{.nodes = 60, .feature_dim = 40}, 2);
  Matrix sparse_x = g.features().unaryExpr([](double v) { return v > 1.5 ? v : 0.0; });
  const auto a = std::make_shared<const SparseMatrix>(gcn_normalize(g.adjacency()));
  const auto as_sparse = make_view(a, sparse_x, 1.0);
  const auto as_dense = make_view(a, sparse_x, 0.0);
  ASSERT_TRUE(as_sparse.sparse_features);
  ASSERT_FALSE(as_dense.sparse_features);
  const auto params = EncoderParams::init(40, 16, 2, Activation::relu, 4);
  EXPECT_LE((encode(as_sparse, params) - encode(as_dense, params)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Encode, PermutationEquivariance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = csbm(CsbmSpec{.nodes = 50, .feature_dim = 12}, seed);
    const auto perm = Rng(seed + 50).permutation(g.num_nodes());
    const auto params = EncoderParams::init(12, 32, 2, Activation::relu, seed);
    const Matrix h = encode(topology_view(g), params);
    const Matrix hp = encode(topology_view(permute_graph(g, perm)), params);
    EXPECT_LE((hp - permute_rows(h, perm)).cwiseAbs().maxCoeff(), 1e-9) << "seed " << seed;
  }
}

TEST(Readout, Examples) {
  ad::Tape tape;
  EXPECT_EQ(readout(tape.constant(Matrix::Zero(3, 2))).value(), Matrix(Matrix::Constant(1, 2, 0.5)));
  Matrix same(3, 2);
  same << 0.3, -1.2, 0.3, -1.2, 0.3, -1.2;
  const auto r = readout(tape.constant(same)).value();
  EXPECT_NEAR(r(0, 0), sigmoid(0.3), 1e-15);
  EXPECT_NEAR(r(0, 1), sigmoid(-1.2), 1e-15);
  Matrix h(2, 2);
  h << 0, 2, 2, 0;
  const auto r2 = readout(tape.constant(h)).value();
  EXPECT_NEAR(r2(0, 0), 0.7310585786300049, 1e-15);
  EXPECT_NEAR(r2(0, 1), 0.7310585786300049, 1e-15);
  EXPECT_THROW(readout(tape.constant(Matrix(0, 2))), ComputeError);
}

TEST(Readout, PermutationInvariantAndInOpenUnitInterval) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ad::Tape tape;
    const Matrix h = oracle::random_matrix(40, 8, seed, -5.0, 5.0);
    const auto perm = Rng(seed).permutation(40);
    const Matrix r = readout(tape.constant(h)).value();
    const Matrix rp = readout(tape.constant(permute_rows(h, perm))).value();
    EXPECT_LE((r - rp).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(r.minCoeff(), 0.0);
    EXPECT_LT(r.maxCoeff(), 1.0);
  }
}

TEST(Project, IdentityHeadNormalizesRows) {
  ad::Tape tape;
  const Matrix x = oracle::random_matrix(5, 4, 3);
  const auto head = put_on_tape(tape, HeadParams::identity(4));
  const auto y = project(tape.constant(x), head, Activation::linear).value();
  Matrix expected = x;
  expected.rowwise().normalize();
  EXPECT_LE((y - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Project, SharedParametersGiveIdenticalBranches) {
  ad::Tape tape;
  const Matrix x = oracle::random_matrix(5, 4, 3);
  const auto head = put_on_tape(tape, HeadParams::init(4, 9));
  EXPECT_EQ(project(tape.constant(x), head, Activation::elu).value(),
            project(tape.constant(x), head, Activation::elu).value());
}

TEST(Project, DimensionMismatch) {
  ad::Tape tape;
  const auto head = put_on_tape(tape, HeadParams::init(4, 9));
  EXPECT_THROW(project(tape.constant(Matrix::Ones(2, 3)), head, Activation::elu), ComputeError);
}

TEST(Activation, ParseRoundTrip) {
  for (auto a : {Activation::relu, Activation::sigmoid, Activation::elu, Activation::linear}) {
    EXPECT_EQ(parse_activation(to_string(a)), a);
  }
  EXPECT_THROW(parse_activation("tanh"), ValidationError);
}

class Checkpoint : public ::testing::Test {
 protected:
  ModelParams params_ = init_params(7, TrainConfig{.dim = 6, .layers = 2, .seed = 5});
  testing::TempDir dir_;
  std::filesystem::path path_ = dir_ / "model.mlgp";
};

TEST_F(Checkpoint, RoundTrip) {
  save_checkpoint(params_, path_);
  EXPECT_EQ(load_checkpoint(path_), params_);
}

TEST_F(Checkpoint, TruncatedFileIsRejected) {
  save_checkpoint(params_, path_);
  const auto bytes = testing::read_file(path_);
  for (std::size_t cut : {std::size_t{3}, std::size_t{10}, bytes.size() / 2, bytes.size() - 1}) {
    testing::write_file(path_, bytes.substr(0, cut));
    EXPECT_THROW(load_checkpoint(path_), IoError) << "cut at " << cut;
  }
}

TEST_F(Checkpoint, VersionMismatchIsNamed) {
  save_checkpoint(params_, path_);
  auto bytes = testing::read_file(path_);
  bytes[4] = static_cast<char>(kCheckpointVersion + 1);
  testing::write_file(path_, bytes);
  try {
    load_checkpoint(path_);
    FAIL() << "expected a version error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
}

TEST_F(Checkpoint, BadMagicAndMissingFile) {
  testing::write_file(path_, "not a checkpoint at all");
  EXPECT_THROW(load_checkpoint(path_), IoError);
  EXPECT_THROW(load_checkpoint(dir_ / "absent.mlgp"), IoError);
}

}  // namespace
}  // namespace mlgcl
