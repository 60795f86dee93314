// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mlgcl/error.hpp"
#include "mlgcl/pipeline.hpp"
#include "mlgcl/synthetic.hpp"

namespace mlgcl {
namespace {

TrainConfig toy_config() {
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.dim = 8;
  cfg.view2.k = 2;
  cfg.refresh_interval = 2;
  cfg.seed = 3;
  return cfg;
}

bool same_history(const TrainHistory& a, const TrainHistory& b) {
  if (a.epochs.size() != b.epochs.size() || a.best_epoch != b.best_epoch) return false;
  for (std::size_t i = 0; i < a.epochs.size(); ++i) {
    const auto& x = a.epochs[i].loss;
    const auto& y = b.epochs[i].loss;
    if (x.total != y.total || x.node_term != y.node_term || x.graph_term != y.graph_term) return false;
  }
  return true;
}

TEST(FeatureView, SaturatedKnnIsNormalizedCompleteGraph) {
  const auto g = toy_graph();
  const auto topo = topology_view(g);
  AugmentationSpec spec;
  spec.k = 5;
  const auto view = build_feature_view(topo, EncoderParams::init(4, 8, 2, Activation::relu, 1), spec);
  Matrix complete = Matrix::Ones(6, 6);
  complete.diagonal().setZero();
  EXPECT_LE((view.adjacency->to_dense() - gcn_normalize(SparseMatrix::from_dense(complete)).to_dense())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  EXPECT_EQ(view.features, g.features());
}

TEST(FeatureView, UntrainedEncoderSeparatesTwoClusters) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = two_cluster_graph(6, seed);
    const auto topo = topology_view(g);
    const auto params = EncoderParams::init(6, 16, 2, Activation::relu, seed + 10);
    for (Index k = 1; k <= 4; ++k) {
      AugmentationSpec spec;
      spec.k = k;
      const auto a = build_feature_view(topo, params, spec).adjacency;
      for (const auto& t : a->triplets()) {
        EXPECT_EQ(t.row < 5, t.col < 5) << "seed " << seed << " k " << k << " edge " << t.row << "-" << t.col;
      }
    }
  }
}

TEST(FeatureView, DeterministicAndRejectsOtherSchemes) {
  const auto g = csbm(CsbmSpec{.nodes = 40}, 1);
  const auto topo = topology_view(g);
  const auto params = EncoderParams::init(g.num_features(), 16, 2, Activation::relu, 2);
  AugmentationSpec spec;
  spec.k = 4;
  EXPECT_EQ(*build_feature_view(topo, params, spec).adjacency, *build_feature_view(topo, params, spec).adjacency);
  spec.k = 40;
  EXPECT_THROW(build_feature_view(topo, params, spec), ValidationError);
  spec.k = 4;
  spec.scheme = AugmentScheme::edge_perturbation;
  EXPECT_THROW(build_feature_view(topo, params, spec), ValidationError);
}

TEST(Train, BestSoFarIsMonotoneAndHistoryBounded) {
  const auto cfg = toy_config();
  const auto r = train(toy_graph(), cfg);
  ASSERT_FALSE(r.history.epochs.empty());
  EXPECT_LE(r.history.epochs.size(), static_cast<std::size_t>(cfg.epochs));
  double best = -INFINITY;
  for (const auto& e : r.history.epochs) {
    best = std::max(best, e.loss.total);
    EXPECT_LE(e.loss.total, 0.0);
  }
  EXPECT_EQ(best, r.history.best_objective);
  EXPECT_EQ(r.history.epochs[r.history.best_epoch - 1].loss.total, best);
}

TEST(Train, ObjectiveImprovesOnSyntheticGraph) {
  auto cfg = toy_config();
  cfg.epochs = 40;
  cfg.patience = 40;
  cfg.lr = 0.01;
  cfg.view2.k = 4;
  const auto r = train(csbm(CsbmSpec{.nodes = 60, .feature_dim = 10}, 4), cfg);
  EXPECT_GT(r.history.best_objective, r.history.epochs.front().loss.total);
}

TEST(Train, DeterministicForFixedSeed) {
  for (auto scheme : {AugmentScheme::knn, AugmentScheme::edge_perturbation, AugmentScheme::attribute_masking}) {
    auto cfg = toy_config();
    cfg.view2.scheme = scheme;
    const auto a = train(toy_graph(), cfg);
    const auto b = train(toy_graph(), cfg);
    EXPECT_TRUE(same_history(a.history, b.history)) << to_string(scheme);
    EXPECT_EQ(a.params, b.params);
  }
}

TEST(Train, SeedChangesTrajectory) {
  auto cfg = toy_config();
  const auto a = train(toy_graph(), cfg);
  cfg.seed = 4;
  EXPECT_FALSE(same_history(a.history, train(toy_graph(), cfg).history));
}

TEST(Train, EarlyStoppingBound) {
  for (int patience : {1, 2, 5}) {
    auto cfg = toy_config();
    cfg.epochs = 300;
    cfg.patience = patience;
    cfg.lr = 0.05;
    const auto r = train(toy_graph(), cfg);
    EXPECT_LE(static_cast<int>(r.history.epochs.size()), r.history.best_epoch + patience);
    if (r.history.stopped_early) {
      EXPECT_EQ(static_cast<int>(r.history.epochs.size()), r.history.best_epoch + patience);
    }
  }
}

TEST(Train, NodeOnlyHasNoGraphTerm) {
  auto cfg = toy_config();
  cfg.mode = ContrastMode::node_only;
  cfg.loss.lambda = 3.0;
  for (const auto& e : train(toy_graph(), cfg).history.epochs) {
    EXPECT_EQ(e.loss.graph_term, 0.0);
    EXPECT_EQ(e.loss.total, e.loss.node_term);
  }
}

TEST(Train, GraphOnlyHasNoNodeTerm) {
  auto cfg = toy_config();
  cfg.mode = ContrastMode::graph_only;
  for (const auto& e : train(toy_graph(), cfg).history.epochs) {
    EXPECT_EQ(e.loss.node_term, 0.0);
    EXPECT_EQ(e.loss.total, e.loss.graph_term);
  }
}

TEST(Train, MultiTotalCombinesTerms) {
  auto cfg = toy_config();
  cfg.loss.lambda = 0.5;
  for (const auto& e : train(toy_graph(), cfg).history.epochs) {
    EXPECT_NEAR(e.loss.total, e.loss.node_term + 0.5 * e.loss.graph_term, 1e-12);
  }
}

TEST(Train, DivergenceAborts) {
  auto cfg = toy_config();
  cfg.lr = 1e300;
  cfg.patience = 10;
  EXPECT_THROW(train(toy_graph(), cfg), ComputeError);
}

TEST(Train, InvalidConfigIsRejectedBeforeCompute) {
  auto cfg = toy_config();
  cfg.epochs = 0;
  EXPECT_THROW(train(toy_graph(), cfg), ValidationError);
  cfg = toy_config();
  cfg.loss.tau = 0.0;
  EXPECT_THROW(train(toy_graph(), cfg), ValidationError);
  cfg = toy_config();
  cfg.view2.k = 6;
  EXPECT_THROW(train(toy_graph(), cfg), ValidationError);
}

TEST(Train, CallbackSeesEveryEpoch) {
  int calls = 0;
  const auto r = train(toy_graph(), toy_config(), [&calls](const EpochRecord& rec) { EXPECT_EQ(rec.epoch, ++calls); });
  EXPECT_EQ(static_cast<std::size_t>(calls), r.history.epochs.size());
}

TEST(ForwardObjective, IdenticalViewsGiveMatchingBranches) {
  const auto g = toy_graph();
  const auto topo = topology_view(g);
  auto cfg = toy_config();
  cfg.mode = ContrastMode::node_only;
  const auto params = init_params(g.num_features(), cfg);
  ad::Tape tape;
  const StepInputs in{&topo, &topo, {0, 1, 2, 3, 4, 5}};
  const auto obj = forward_objective(tape, params, in, cfg);
  // With za == zb every anchor sees the same logits from either side.
  ad::Tape t2;
  const Matrix h = encode(topo, params.encoder);
  const auto head = put_on_tape(t2, params.heads.node);
  const auto z = project(t2.constant(h), head, params.heads.activation);
  EXPECT_NEAR(obj.report.node_term, node_contrastive_loss(z, z, cfg.loss.tau).item(), 1e-12);
}

TEST(HistoryCsv, HeaderAndRows) {
  const auto r = train(toy_graph(), toy_config());
  std::ostringstream out;
  write_history_csv(r.history, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epoch,node_term,graph_term,total");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, r.history.epochs.size());
}

}  // namespace
}  // namespace mlgcl
