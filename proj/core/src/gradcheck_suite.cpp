// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/gradcheck_suite.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "mlgcl/augment.hpp"
#include "mlgcl/loss.hpp"
#include "mlgcl/model.hpp"
#include "mlgcl/pipeline.hpp"
#include "mlgcl/random.hpp"
#include "mlgcl/synthetic.hpp"

namespace mlgcl {
namespace {

using ad::Tape;
using ad::Tensor;
using Inputs = std::span<const Tensor>;

// Entries uniform in [lo, hi]; with gap > 0, entries closer than gap to zero
// are pushed out to +-gap.
Matrix random_matrix(Rng& rng, Index rows, Index cols, double lo = -1.0, double hi = 1.0, double gap = 0.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    double v = rng.uniform(lo, hi);
    if (std::abs(v) < gap) v = v < 0.0 ? -gap : gap;
    m.data()[i] = v;
  }
  return m;
}

// Scalar l y r with l, r fixed random vectors chosen by the shape of y. The
// gradient with respect to y is the dense rank-one matrix l^T r^T.
Tensor contract(const Tensor& y, std::uint64_t seed) {
  Tape& tape = *y.tape();
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(y.rows() * 7919 + y.cols())));
  const Matrix l = random_matrix(rng, 1, y.rows());
  const Matrix r = random_matrix(rng, y.cols(), 1);
  return ad::matmul(ad::matmul(tape.constant(l), y), tape.constant(r));
}

using Op = std::function<Tensor(Inputs)>;

GradcheckCase op_case(std::string name, std::vector<Matrix> inputs, Op op, std::uint64_t seed) {
  return {std::move(name), [op, seed](Tape&, Inputs xs) { return contract(op(xs), seed); }, std::move(inputs)};
}

}  // namespace

std::vector<GradcheckCase> gradcheck_suite(std::uint64_t seed) {
  Rng rng(seed);
  const auto cs = derive_seed(seed, 1);
  auto m = [&rng](Index r, Index c, double lo = -1.0, double hi = 1.0, double gap = 0.0) {
    return random_matrix(rng, r, c, lo, hi, gap);
  };
  const Graph toy = toy_graph();
  const auto a_norm = std::make_shared<const SparseMatrix>(gcn_normalize(toy.adjacency()));
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<GradcheckCase> cases;
  cases.push_back(op_case("matmul", {m(4, 3), m(3, 5)}, [](Inputs x) { return ad::matmul(x[0], x[1]); }, cs));
  cases.push_back(op_case("matmul_nt", {m(4, 3), m(5, 3)}, [](Inputs x) { return ad::matmul_nt(x[0], x[1]); }, cs));
  cases.push_back(op_case("gram", {m(4, 3)}, [](Inputs x) { return ad::gram(x[0]); }, cs));
  cases.push_back(op_case("spmm", {m(6, 3)}, [a_norm](Inputs x) { return ad::spmm(a_norm, x[0]); }, cs));
  cases.push_back(op_case("relu", {m(4, 3, -1, 1, 0.1)}, [](Inputs x) { return ad::relu(x[0]); }, cs));
  cases.push_back(op_case("sigmoid", {m(4, 3, -3, 3)}, [](Inputs x) { return ad::sigmoid(x[0]); }, cs));
  cases.push_back(op_case("elu", {m(4, 3, -2, 2, 0.1)}, [](Inputs x) { return ad::elu(x[0]); }, cs));
  cases.push_back(op_case("exp", {m(4, 3)}, [](Inputs x) { return ad::exp(x[0]); }, cs));
  cases.push_back(op_case("log", {m(4, 3, 0.5, 2.0)}, [](Inputs x) { return ad::log(x[0]); }, cs));
  cases.push_back(op_case("add", {m(4, 3), m(4, 3)}, [](Inputs x) { return ad::add(x[0], x[1]); }, cs));
  cases.push_back(op_case("sub", {m(4, 3), m(4, 3)}, [](Inputs x) { return ad::sub(x[0], x[1]); }, cs));
  cases.push_back(op_case("scale", {m(4, 3)}, [](Inputs x) { return ad::scale(x[0], -1.7); }, cs));
  {
    Matrix c = m(4, 3);
    cases.push_back(op_case("add_constant", {m(4, 3)}, [c](Inputs x) { return ad::add_constant(x[0], c); }, cs));
  }
  cases.push_back(
      op_case("add_row_bias", {m(4, 3), m(1, 3)}, [](Inputs x) { return ad::add_row_bias(x[0], x[1]); }, cs));
  cases.push_back(op_case("transpose", {m(4, 3)}, [](Inputs x) { return ad::transpose(x[0]); }, cs));
  cases.push_back(
      op_case("concat_cols", {m(4, 3), m(4, 2)}, [](Inputs x) { return ad::concat_cols(x[0], x[1]); }, cs));
  cases.push_back(op_case("diagonal", {m(4, 4)}, [](Inputs x) { return ad::diagonal(x[0]); }, cs));
  cases.push_back(op_case("sum", {m(4, 3)}, [](Inputs x) { return ad::sum(x[0]); }, cs));
  cases.push_back(op_case("mean", {m(4, 3)}, [](Inputs x) { return ad::mean(x[0]); }, cs));
  cases.push_back(op_case("row_mean", {m(4, 3)}, [](Inputs x) { return ad::row_mean(x[0]); }, cs));
  {
    Matrix mask = Matrix::Zero(4, 5);
    mask(0, 2) = kNegInf;
    mask(3, 0) = kNegInf;
    cases.push_back(op_case("logsumexp_rows", {m(4, 5, -3, 3)},
                            [mask](Inputs x) { return ad::logsumexp_rows(ad::add_constant(x[0], mask)); }, cs));
  }
  cases.push_back(
      op_case("l2_normalize_rows", {m(4, 3, -1, 1, 0.1)}, [](Inputs x) { return ad::l2_normalize_rows(x[0]); }, cs));

  auto node_loss = [](bool literal) {
    return [literal](Tape&, Inputs x) {
      return node_contrastive_loss(ad::l2_normalize_rows(x[0]), ad::l2_normalize_rows(x[1]), 0.5, literal);
    };
  };
  cases.push_back({"node_contrastive_loss", node_loss(false), {m(6, 4, -1, 1, 0.1), m(6, 4, -1, 1, 0.1)}});
  cases.push_back({"node_contrastive_loss_literal", node_loss(true), {m(6, 4, -1, 1, 0.1), m(6, 4, -1, 1, 0.1)}});
  cases.push_back({"graph_contrastive_loss",
                   [](Tape&, Inputs x) {
                     return graph_contrastive_loss(ad::l2_normalize_rows(x[0]), ad::l2_normalize_rows(x[1]),
                                                   ad::l2_normalize_rows(x[2]), ad::l2_normalize_rows(x[3]), 0.5);
                   },
                   {m(1, 4, -1, 1, 0.1), m(1, 4, -1, 1, 0.1), m(1, 4, -1, 1, 0.1), m(1, 4, -1, 1, 0.1)}});

  {
    const auto view = std::make_shared<const View>(make_view(a_norm, toy.features()));
    cases.push_back(op_case("gcn_encoder", {m(4, 5), m(5, 5)},
                            [view](Inputs x) { return encode(*view, x, Activation::relu); }, cs));
    cases.push_back(op_case("readout", {m(6, 3)}, [](Inputs x) { return readout(x[0]); }, cs));
    cases.push_back(op_case("projection_head", {m(6, 4), m(4, 4), m(1, 4), m(4, 4), m(1, 4)},
                            [](Inputs x) {
                              return project(x[0], HeadTensors{x[1], x[2], x[3], x[4]}, Activation::elu);
                            },
                            cs));
  }

  // Full objective on the toy graph at initialization, kNN feature view.
  {
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.layers = 2;
    cfg.view2.k = 2;
    cfg.seed = seed;
    const ModelParams params = init_params(toy.num_features(), cfg);
    const auto topo = std::make_shared<const View>(topology_view(toy));
    const auto feat = std::make_shared<const View>(build_feature_view(*topo, params.encoder, cfg.view2));
    const auto shuffle = shuffle_permutation(toy.num_nodes(), derive_seed(seed, 2));
    std::vector<Matrix> inputs;
    for (const Matrix* p : params.all()) inputs.push_back(*p);
    cases.push_back({"objective",
                     [cfg, topo, feat, shuffle](Tape&, Inputs x) {
                       const StepInputs step{topo.get(), feat.get(), shuffle};
                       return forward_objective(x, cfg.encoder_activation, cfg.head_activation, step, cfg).value;
                     },
                     std::move(inputs)});
  }
  return cases;
}

std::vector<GradcheckResult> run_gradcheck(const std::vector<GradcheckCase>& cases, const std::string& faulty_case) {
  std::vector<GradcheckResult> out;
  for (const auto& c : cases) {
    FiniteDiffOptions options;
    if (c.name == faulty_case) {
      options.tamper = [](std::vector<Matrix>& grads) { grads.front().data()[0] = grads.front().data()[0] * 1.01 + 1e-3; };
    }
    const auto report = finite_diff_check(c.fn, c.inputs, options);
    out.push_back({c.name, report, report.checked > 0 && report.max_rel_error < kGradcheckTolerance});
  }
  return out;
}

}  // namespace mlgcl
