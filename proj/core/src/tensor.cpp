// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/tensor.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mlgcl/error.hpp"

namespace mlgcl::ad {
namespace {

Tape& tape_of(const Tensor& t) {
  if (!t.valid()) throw ComputeError("use of an empty tensor handle");
  return *t.tape();
}

Tape& same_tape(const Tensor& a, const Tensor& b) {
  Tape& tape = tape_of(a);
  if (b.tape() != &tape) throw ComputeError("operands live on different tapes");
  return tape;
}

std::string shape_str(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ComputeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
  }
}

// out += s * d, row by row in CSR order.
void spmm_kernel(const SparseMatrix& s, const Matrix& d, Matrix& out) {
  for (Index r = 0; r < s.rows(); ++r) {
    const auto cols = s.row_cols(r);
    const auto vals = s.row_values(r);
    for (std::size_t p = 0; p < cols.size(); ++p) out.row(r).noalias() += vals[p] * d.row(cols[p]);
  }
}

// out += s^T * g without materializing the transpose.
void spmm_transposed_kernel(const SparseMatrix& s, const Matrix& g, Matrix& out) {
  for (Index r = 0; r < s.rows(); ++r) {
    const auto cols = s.row_cols(r);
    const auto vals = s.row_values(r);
    for (std::size_t p = 0; p < cols.size(); ++p) out.row(cols[p]).noalias() += vals[p] * g.row(r);
  }
}

// Records a unary op y = f(x); local_grad(x, y, upstream) reads the saved
// values straight from the tape.
template <class LocalGrad>
Tensor unary(const Tensor& x, Matrix y, LocalGrad local_grad) {
  Tape& tape = tape_of(x);
  const std::size_t xid = x.id();
  if (!tape.recording()) return tape.record(std::move(y), {xid}, nullptr);
  const std::size_t yid = tape.size();
  return tape.record(std::move(y), {xid}, [xid, yid, &tape, local_grad](const Matrix& g, Gradients& grads) {
    grads.accumulate(xid, local_grad(tape.value(xid), tape.value(yid), g));
  });
}

}  // namespace

const Matrix& Tensor::value() const { return tape_of(*this).value(id_); }

bool Tensor::requires_grad() const { return tape_of(*this).requires_grad(id_); }

double Tensor::item() const {
  const auto& v = value();
  if (v.rows() != 1 || v.cols() != 1) throw ComputeError("item() on a " + shape_str(v) + " tensor");
  return v(0, 0);
}

Tensor Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), false, {}, nullptr});
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::leaf(Matrix value) {
  nodes_.push_back(Node{std::move(value), recording(), {}, nullptr});
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward) {
  bool rg = false;
  if (recording()) {
    for (auto p : parents) rg = rg || nodes_[p].requires_grad;
  }
  Node node{std::move(value), rg, {}, nullptr};
  if (rg) {
    node.parents = std::move(parents);
    node.backward = std::move(backward);
  }
  nodes_.push_back(std::move(node));
  return Tensor(this, nodes_.size() - 1);
}

void Tape::note_relu_inputs(const Matrix& pre) {
  relu_signature_.reserve(relu_signature_.size() + static_cast<std::size_t>(pre.size()));
  for (Index i = 0; i < pre.size(); ++i) relu_signature_.push_back(pre.data()[i] > 0.0 ? 1 : 0);
}

Matrix Gradients::of(const Tensor& t) const {
  if (t.tape() != tape_) throw ComputeError("gradient requested for a tensor from another tape");
  const auto& s = slots_[t.id()];
  if (s.size() == 0) return Matrix::Zero(t.rows(), t.cols());
  return s;
}

void Gradients::accumulate(std::size_t id, const Matrix& g) {
  if (!tape_->requires_grad(id)) return;
  auto& s = slots_[id];
  if (s.size() == 0) {
    s = g;
  } else {
    s += g;
  }
}

Gradients backward(Tape& tape, const Tensor& loss) {
  if (!tape.recording()) throw ComputeError("backward on an inference-mode tape");
  if (loss.tape() != &tape) throw ComputeError("loss does not belong to this tape");
  if (loss.rows() != 1 || loss.cols() != 1) throw ComputeError("backward needs a scalar loss, got " + shape_str(loss.value()));
  Gradients grads(&tape);
  if (!tape.requires_grad(loss.id())) return grads;
  grads.accumulate(loss.id(), Matrix::Ones(1, 1));
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    const auto& node = tape.nodes_[id];
    if (!node.backward) continue;
    const Matrix* g = grads.slot(id);
    if (g == nullptr) continue;
    node.backward(*g, grads);
  }
  return grads;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows()) throw ComputeError("matmul: inner dimensions differ, " + shape_str(av) + " x " + shape_str(bv));
  Matrix c(av.rows(), bv.cols());
  c.noalias() = av * bv;
  const auto aid = a.id();
  const auto bid = b.id();
  if (!tape.recording()) return tape.record(std::move(c), {aid, bid}, nullptr);
  const bool need_a = a.requires_grad();
  const bool need_b = b.requires_grad();
  return tape.record(std::move(c), {aid, bid},
                     [aid, bid, need_a, need_b, &tape](const Matrix& g, Gradients& grads) {
                       if (need_a) {
                         Matrix da(g.rows(), tape.value(bid).rows());
                         da.noalias() = g * tape.value(bid).transpose();
                         grads.accumulate(aid, da);
                       }
                       if (need_b) {
                         Matrix db(tape.value(aid).cols(), g.cols());
                         db.noalias() = tape.value(aid).transpose() * g;
                         grads.accumulate(bid, db);
                       }
                     });
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.cols()) throw ComputeError("matmul_nt: column counts differ, " + shape_str(av) + " vs " + shape_str(bv));
  Matrix c(av.rows(), bv.rows());
  c.noalias() = av * bv.transpose();
  const auto aid = a.id();
  const auto bid = b.id();
  if (!tape.recording()) return tape.record(std::move(c), {aid, bid}, nullptr);
  const bool need_a = a.requires_grad();
  const bool need_b = b.requires_grad();
  return tape.record(std::move(c), {aid, bid},
                     [aid, bid, need_a, need_b, &tape](const Matrix& g, Gradients& grads) {
                       if (need_a) {
                         Matrix da(g.rows(), tape.value(bid).cols());
                         da.noalias() = g * tape.value(bid);
                         grads.accumulate(aid, da);
                       }
                       if (need_b) {
                         Matrix db(g.cols(), tape.value(aid).cols());
                         db.noalias() = g.transpose() * tape.value(aid);
                         grads.accumulate(bid, db);
                       }
                     });
}

Tensor gram(const Tensor& x) {
  Tape& tape = tape_of(x);
  const Matrix& xv = x.value();
  Matrix c = Matrix::Zero(xv.rows(), xv.rows());
  c.selfadjointView<Eigen::Lower>().rankUpdate(xv);
  c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
  const auto xid = x.id();
  if (!tape.recording()) return tape.record(std::move(c), {xid}, nullptr);
  return tape.record(std::move(c), {xid}, [xid, &tape](const Matrix& g, Gradients& grads) {
    const Matrix& xv = tape.value(xid);
    Matrix sym = g + g.transpose();
    Matrix dx(xv.rows(), xv.cols());
    dx.noalias() = sym.selfadjointView<Eigen::Lower>() * xv;
    grads.accumulate(xid, dx);
  });
}

namespace {

template <class Holder>
Tensor spmm_impl(const SparseMatrix& s, Holder holder, const Tensor& d) {
  Tape& tape = tape_of(d);
  const Matrix& dv = d.value();
  if (s.cols() != dv.rows()) {
    throw ComputeError("spmm: inner dimensions differ, " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                       " x " + shape_str(dv));
  }
  Matrix out = Matrix::Zero(s.rows(), dv.cols());
  spmm_kernel(s, dv, out);
  const auto did = d.id();
  if (!tape.recording()) return tape.record(std::move(out), {did}, nullptr);
  return tape.record(std::move(out), {did}, [did, &s, holder](const Matrix& g, Gradients& grads) {
    Matrix dd = Matrix::Zero(s.cols(), g.cols());
    spmm_transposed_kernel(s, g, dd);
    grads.accumulate(did, dd);
  });
}

}  // namespace

Tensor spmm(const SparseMatrix& s, const Tensor& d) { return spmm_impl(s, nullptr, d); }

Tensor spmm(std::shared_ptr<const SparseMatrix> s, const Tensor& d) {
  if (!s) throw ComputeError("spmm: null sparse matrix");
  const SparseMatrix& ref = *s;
  return spmm_impl(ref, std::move(s), d);
}

Tensor relu(const Tensor& x) {
  tape_of(x).note_relu_inputs(x.value());
  Matrix y = x.value().cwiseMax(0.0);
  return unary(x, std::move(y), [](const Matrix& xv, const Matrix&, const Matrix& g) -> Matrix {
    return (xv.array() > 0.0).select(g, 0.0);
  });
}

Tensor sigmoid(const Tensor& x) {
  Matrix y = x.value().unaryExpr([](double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
  return unary(x, std::move(y), [](const Matrix&, const Matrix& yv, const Matrix& g) -> Matrix {
    return g.array() * yv.array() * (1.0 - yv.array());
  });
}

Tensor elu(const Tensor& x, double alpha) {
  Matrix y = x.value().unaryExpr([alpha](double v) { return v > 0.0 ? v : alpha * std::expm1(v); });
  return unary(x, std::move(y), [alpha](const Matrix& xv, const Matrix& yv, const Matrix& g) -> Matrix {
    return (xv.array() > 0.0).select(g, g.array() * (yv.array() + alpha));
  });
}

Tensor exp(const Tensor& x) {
  Matrix y = x.value().array().exp().matrix();
  return unary(x, std::move(y), [](const Matrix&, const Matrix& yv, const Matrix& g) -> Matrix {
    return g.cwiseProduct(yv);
  });
}

Tensor log(const Tensor& x) {
  if ((x.value().array() <= 0.0).any()) throw ComputeError("log of a non-positive value");
  Matrix y = x.value().array().log().matrix();
  return unary(x, std::move(y), [](const Matrix& xv, const Matrix&, const Matrix& g) -> Matrix {
    return g.cwiseQuotient(xv);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  require_same_shape("add", a.value(), b.value());
  const auto aid = a.id();
  const auto bid = b.id();
  return tape.record(a.value() + b.value(), {aid, bid}, [aid, bid](const Matrix& g, Gradients& grads) {
    grads.accumulate(aid, g);
    grads.accumulate(bid, g);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  require_same_shape("sub", a.value(), b.value());
  const auto aid = a.id();
  const auto bid = b.id();
  return tape.record(a.value() - b.value(), {aid, bid}, [aid, bid](const Matrix& g, Gradients& grads) {
    grads.accumulate(aid, g);
    grads.accumulate(bid, -g);
  });
}

Tensor scale(const Tensor& x, double c) {
  const auto xid = x.id();
  return tape_of(x).record(c * x.value(), {xid}, [xid, c](const Matrix& g, Gradients& grads) {
    grads.accumulate(xid, c * g);
  });
}

Tensor add_constant(const Tensor& x, const Matrix& c) {
  require_same_shape("add_constant", x.value(), c);
  const auto xid = x.id();
  return tape_of(x).record(x.value() + c, {xid}, [xid](const Matrix& g, Gradients& grads) {
    grads.accumulate(xid, g);
  });
}

Tensor add_row_bias(const Tensor& x, const Tensor& bias) {
  Tape& tape = same_tape(x, bias);
  if (bias.rows() != 1 || bias.cols() != x.cols()) {
    throw ComputeError("add_row_bias: bias " + shape_str(bias.value()) + " does not fit " + shape_str(x.value()));
  }
  Matrix y = x.value().rowwise() + bias.value().row(0);
  const auto xid = x.id();
  const auto bid = bias.id();
  return tape.record(std::move(y), {xid, bid}, [xid, bid](const Matrix& g, Gradients& grads) {
    grads.accumulate(xid, g);
    grads.accumulate(bid, g.colwise().sum());
  });
}

Tensor transpose(const Tensor& x) {
  const auto xid = x.id();
  return tape_of(x).record(x.value().transpose(), {xid}, [xid](const Matrix& g, Gradients& grads) {
    grads.accumulate(xid, g.transpose());
  });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  if (a.rows() != b.rows()) throw ComputeError("concat_cols: row counts differ");
  Matrix y(a.rows(), a.cols() + b.cols());
  y << a.value(), b.value();
  const auto aid = a.id();
  const auto bid = b.id();
  const Index split = a.cols();
  return tape.record(std::move(y), {aid, bid}, [aid, bid, split](const Matrix& g, Gradients& grads) {
    grads.accumulate(aid, g.leftCols(split));
    grads.accumulate(bid, g.rightCols(g.cols() - split));
  });
}

Tensor diagonal(const Tensor& x) {
  if (x.rows() != x.cols()) throw ComputeError("diagonal of a non-square " + shape_str(x.value()) + " tensor");
  Matrix y = x.value().diagonal();
  const auto xid = x.id();
  const Index n = x.rows();
  return tape_of(x).record(std::move(y), {xid}, [xid, n](const Matrix& g, Gradients& grads) {
    Matrix dx = Matrix::Zero(n, n);
    dx.diagonal() = g.col(0);
    grads.accumulate(xid, dx);
  });
}

Tensor sum(const Tensor& x) {
  Matrix y(1, 1);
  y(0, 0) = x.value().sum();
  const auto xid = x.id();
  const Index r = x.rows();
  const Index c = x.cols();
  return tape_of(x).record(std::move(y), {xid}, [xid, r, c](const Matrix& g, Gradients& grads) {
    grads.accumulate(xid, Matrix::Constant(r, c, g(0, 0)));
  });
}

Tensor mean(const Tensor& x) {
  if (x.value().size() == 0) throw ComputeError("mean of an empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(x.value().size()));
}

Tensor row_mean(const Tensor& x) {
  const Index n = x.rows();
  if (n == 0) throw ComputeError("row_mean of an empty tensor");
  Matrix y = x.value().colwise().mean();
  const auto xid = x.id();
  return tape_of(x).record(std::move(y), {xid}, [xid, n](const Matrix& g, Gradients& grads) {
    Matrix dx = g.replicate(n, 1) / static_cast<double>(n);
    grads.accumulate(xid, dx);
  });
}

Tensor logsumexp_rows(const Tensor& x) {
  const Matrix& xv = x.value();
  const Index n = xv.rows();
  Matrix y(n, 1);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double m = xv.cols() == 0 ? kNegInf : xv.row(i).maxCoeff();
    y(i, 0) = m == kNegInf ? kNegInf : m + std::log((xv.row(i).array() - m).exp().sum());
  }
  Tape& tape = tape_of(x);
  const auto xid = x.id();
  const std::size_t yid = tape.size();
  return tape.record(std::move(y), {xid}, [xid, yid, &tape](const Matrix& g, Gradients& grads) {
    const Matrix& xv = tape.value(xid);
    const Matrix& yv = tape.value(yid);
    Matrix dx = Matrix::Zero(xv.rows(), xv.cols());
    for (Index i = 0; i < xv.rows(); ++i) {
      if (std::isinf(yv(i, 0))) continue;
      dx.row(i) = g(i, 0) * (xv.row(i).array() - yv(i, 0)).exp();
    }
    grads.accumulate(xid, dx);
  });
}

Tensor l2_normalize_rows(const Tensor& x, double eps) {
  if (!(eps > 0.0)) throw ComputeError("l2_normalize_rows: eps must be positive");
  const Matrix& xv = x.value();
  Eigen::VectorXd denom = xv.rowwise().norm().cwiseMax(eps);
  Matrix y = xv.array().colwise() / denom.array();
  const auto xid = x.id();
  Tape& tape = tape_of(x);
  if (!tape.recording()) return tape.record(std::move(y), {xid}, nullptr);
  const std::size_t yid = tape.size();
  return tape.record(std::move(y), {xid}, [xid, yid, eps, denom, &tape](const Matrix& g, Gradients& grads) {
    const Matrix& yv = tape.value(yid);
    Matrix dx(g.rows(), g.cols());
    for (Index i = 0; i < g.rows(); ++i) {
      if (tape.value(xid).row(i).norm() >= eps) {
        const double proj = yv.row(i).dot(g.row(i));
        dx.row(i) = (g.row(i) - proj * yv.row(i)) / denom(i);
      } else {
        dx.row(i) = g.row(i) / eps;
      }
    }
    grads.accumulate(xid, dx);
  });
}

}  // namespace mlgcl::ad
