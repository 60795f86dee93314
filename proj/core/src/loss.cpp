// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "mlgcl/error.hpp"

namespace mlgcl {
namespace {

void require_tau(double tau) {
  if (!(tau > 0.0)) throw ValidationError("temperature tau must be positive");
}

void require_finite(const ad::Tensor& t, const char* what) {
  if (!t.value().allFinite()) throw ComputeError(std::string(what) + ": NaN or Inf in input");
}

// log-sum-exp of row i of [c, d]. Rows are contiguous, so each one is a
// single vectorized pass.
Eigen::VectorXd lse_rows(const Matrix& c, const Matrix& d) {
  Eigen::VectorXd out(c.rows());
  for (Index i = 0; i < c.rows(); ++i) {
    const double m = std::max(c.row(i).maxCoeff(), d.row(i).maxCoeff());
    const double s = (c.row(i).array() - m).exp().sum() + (d.row(i).array() - m).exp().sum();
    out(i) = m + std::log(s);
  }
  return out;
}

// exp(x_ij - shift_i)
Matrix exp_shifted(const Matrix& x, const Eigen::VectorXd& shift) {
  Matrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) out.row(i).array() = (x.row(i).array() - shift(i)).exp();
  return out;
}

Matrix gram_of(const Matrix& x, double scale) {
  Matrix c = Matrix::Zero(x.rows(), x.rows());
  c.selfadjointView<Eigen::Lower>().rankUpdate(x, scale);
  c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
  return c;
}

// Saved forward state. `cross` is S_ab / tau with the denominator bias on the
// diagonal and `cross_t` its transpose; view a anchors on the rows of `cross`,
// view b on the rows of `cross_t`. `self_*` are the same-view blocks with -inf
// on the diagonal.
struct NodeLossState {
  Matrix cross, cross_t, self_a, self_b;
  Eigen::VectorXd lse_a, lse_b;
  double inv_tau = 1.0;
};

}  // namespace

void LossConfig::validate() const {
  require_tau(tau);
  if (!(lambda >= 0.0)) throw ValidationError("loss.lambda must be >= 0");
}

ad::Tensor node_contrastive_loss(const ad::Tensor& za, const ad::Tensor& zb, double tau, bool literal_denominator) {
  require_tau(tau);
  if (za.rows() != zb.rows() || za.cols() != zb.cols()) throw ComputeError("node loss: views have different shapes");
  if (za.rows() < 1) throw ComputeError("node loss: empty views");
  if (literal_denominator && za.rows() < 2) throw ValidationError("literal node-loss denominator needs N >= 2");
  require_finite(za, "node loss");
  require_finite(zb, "node loss");
  const Index n = za.rows();
  const Matrix& a = za.value();
  const Matrix& b = zb.value();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  auto st = std::make_shared<NodeLossState>();
  st->inv_tau = 1.0 / tau;
  st->cross.noalias() = a * b.transpose();
  st->cross *= st->inv_tau;
  const Eigen::VectorXd positive = st->cross.diagonal();
  const double bias = literal_denominator ? std::log(static_cast<double>(n - 1)) : 0.0;
  st->cross.diagonal().array() += bias;
  st->self_a = gram_of(a, st->inv_tau);
  st->self_b = gram_of(b, st->inv_tau);
  st->self_a.diagonal().setConstant(kNegInf);
  st->self_b.diagonal().setConstant(kNegInf);
  st->cross_t = st->cross.transpose();
  st->lse_a = lse_rows(st->cross, st->self_a);
  st->lse_b = lse_rows(st->cross_t, st->self_b);

  Matrix value(1, 1);
  value(0, 0) = 0.5 * ((positive - st->lse_a).mean() + (positive - st->lse_b).mean());

  ad::Tape& tape = *za.tape();
  if (zb.tape() != &tape) throw ComputeError("node loss: views live on different tapes");
  const auto aid = za.id();
  const auto bid = zb.id();
  if (!tape.recording()) return tape.record(std::move(value), {aid, bid}, nullptr);
  return tape.record(std::move(value), {aid, bid}, [st, aid, bid, &tape](const Matrix& g, ad::Gradients& grads) {
    const Matrix& a = tape.value(aid);
    const Matrix& b = tape.value(bid);
    const double c = 0.5 * g(0, 0) / static_cast<double>(a.rows());
    // Each direction contributes c * (onehot(positive) - softmax) to dL/dS.
    Matrix g_ab = exp_shifted(st->cross, st->lse_a);
    g_ab += exp_shifted(st->cross_t, st->lse_b).transpose();
    g_ab *= -c;
    g_ab.diagonal().array() += 2.0 * c;
    Matrix g_aa = exp_shifted(st->self_a, st->lse_a);
    Matrix g_bb = exp_shifted(st->self_b, st->lse_b);
    g_aa += g_aa.transpose().eval();
    g_bb += g_bb.transpose().eval();
    g_aa *= -c;
    g_bb *= -c;
    Matrix da(a.rows(), a.cols());
    da.noalias() = g_ab * b;
    da.noalias() += g_aa * a;
    da *= st->inv_tau;
    Matrix db(b.rows(), b.cols());
    db.noalias() = g_ab.transpose() * a;
    db.noalias() += g_bb * b;
    db *= st->inv_tau;
    grads.accumulate(aid, da);
    grads.accumulate(bid, db);
  });
}

ad::Tensor graph_contrastive_loss(const ad::Tensor& sa, const ad::Tensor& sb, const ad::Tensor& ta,
                                  const ad::Tensor& tb, double tau) {
  require_tau(tau);
  for (const auto* t : {&sa, &sb, &ta, &tb}) {
    if (t->rows() != 1 || t->cols() != sa.cols()) throw ComputeError("graph loss: summaries must be 1 x d rows");
    require_finite(*t, "graph loss");
  }
  const double inv_tau = 1.0 / tau;
  auto dot = [inv_tau](const ad::Tensor& u, const ad::Tensor& v) {
    return ad::scale(ad::matmul_nt(u, v), inv_tau);
  };
  auto direction = [&](const ad::Tensor& anchor, const ad::Tensor& pos, const ad::Tensor& neg1,
                       const ad::Tensor& neg2) {
    const auto p = dot(anchor, pos);
    const auto logits = ad::concat_cols(ad::concat_cols(p, dot(anchor, neg1)), dot(anchor, neg2));
    return ad::sub(p, ad::logsumexp_rows(logits));
  };
  return ad::add(direction(sa, sb, ta, tb), direction(sb, sa, tb, ta));
}

Objective multi_level_loss(const ad::Tensor& node_term, const ad::Tensor& graph_term, double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be >= 0");
  Objective obj{ad::add(node_term, ad::scale(graph_term, lambda)), {}};
  obj.report.node_term = node_term.item();
  obj.report.graph_term = graph_term.item();
  obj.report.total = obj.value.item();
  return obj;
}

}  // namespace mlgcl
