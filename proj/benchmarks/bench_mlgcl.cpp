// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <memory>

#include "mlgcl/augment.hpp"
#include "mlgcl/loss.hpp"
#include "mlgcl/pipeline.hpp"
#include "mlgcl/random.hpp"
#include "mlgcl/synthetic.hpp"
#include "mlgcl/tensor.hpp"

namespace {

using mlgcl::Index;
using mlgcl::Matrix;

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  mlgcl::Rng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

mlgcl::Graph bench_graph(Index n) {
  mlgcl::CsbmSpec spec;
  spec.nodes = n;
  spec.feature_dim = 256;
  spec.average_degree = 4.0;
  return mlgcl::csbm(spec, 7);
}

void BM_Matmul(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = random_matrix(n, 256, 1);
  const Matrix b = random_matrix(256, 128, 2);
  for (auto _ : state) {
    Matrix c = a * b;
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * n * 256 * 128);
}
BENCHMARK(BM_Matmul)->Arg(512)->Arg(2048);

void BM_Spmm(benchmark::State& state) {
  const auto g = bench_graph(state.range(0));
  const auto a = std::make_shared<const mlgcl::SparseMatrix>(mlgcl::gcn_normalize(g.adjacency()));
  const Matrix x = random_matrix(g.num_nodes(), 128, 3);
  for (auto _ : state) {
    mlgcl::ad::Tape tape(mlgcl::ad::Tape::Mode::inference);
    auto y = mlgcl::ad::spmm(a, tape.constant(x));
    benchmark::DoNotOptimize(y.value().data());
  }
  state.counters["nnz"] = static_cast<double>(a->nnz());
}
BENCHMARK(BM_Spmm)->Arg(512)->Arg(2048);

void BM_KnnGraph(benchmark::State& state) {
  const Index n = state.range(0);
  const auto s = mlgcl::cosine_similarity_matrix(random_matrix(n, 64, 4));
  for (auto _ : state) {
    auto knn = mlgcl::knn_graph(s, 10);
    benchmark::DoNotOptimize(knn.nnz());
  }
}
BENCHMARK(BM_KnnGraph)->Arg(512)->Arg(2048);

void BM_NodeLossForwardBackward(benchmark::State& state) {
  const Index n = state.range(0);
  Matrix za = random_matrix(n, 128, 5);
  Matrix zb = random_matrix(n, 128, 6);
  za.rowwise().normalize();
  zb.rowwise().normalize();
  for (auto _ : state) {
    mlgcl::ad::Tape tape;
    const auto a = tape.leaf(za);
    const auto b = tape.leaf(zb);
    const auto loss = mlgcl::node_contrastive_loss(a, b, 0.5, false);
    auto grads = mlgcl::ad::backward(tape, loss);
    benchmark::DoNotOptimize(grads.of(a).data());
  }
}
BENCHMARK(BM_NodeLossForwardBackward)->Arg(512)->Arg(2048);

void BM_TrainEpoch(benchmark::State& state) {
  const auto g = bench_graph(state.range(0));
  mlgcl::TrainConfig cfg;
  cfg.dim = 128;
  cfg.view2.k = 10;
  const auto params = mlgcl::init_params(g.num_features(), cfg);
  const auto topo = mlgcl::topology_view(g);
  const auto feat = mlgcl::build_feature_view(topo, params.encoder, cfg.view2);
  const mlgcl::StepInputs inputs{&topo, &feat, mlgcl::shuffle_permutation(g.num_nodes(), 8)};
  for (auto _ : state) {
    mlgcl::ad::Tape tape;
    const auto obj = mlgcl::forward_objective(tape, params, inputs, cfg);
    auto grads = mlgcl::ad::backward(tape, obj.value);
    benchmark::DoNotOptimize(grads.slot(0));
  }
}
BENCHMARK(BM_TrainEpoch)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
