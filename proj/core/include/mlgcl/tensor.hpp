// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mlgcl/graph.hpp"

namespace mlgcl::ad {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape lives.
class Tensor {
 public:
  Tensor() = default;

  const Matrix& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  bool requires_grad() const;
  // Scalar value of a 1x1 tensor.
  double item() const;

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Tensor(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Gradients;

// Ordered record of every op applied during a forward pass. Node ids increase
// in execution order, so walking ids downwards is a valid reverse topological
// order. In inference mode values are computed but no backward closures or
// saved activations are kept.
class Tape {
 public:
  enum class Mode { record, inference };

  explicit Tape(Mode mode = Mode::record) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Mode mode() const { return mode_; }
  bool recording() const { return mode_ == Mode::record; }
  std::size_t size() const { return nodes_.size(); }

  // Input that gradients are not taken for.
  Tensor constant(Matrix value);
  // Differentiable input; backward() reports a gradient for it.
  Tensor leaf(Matrix value);

  // Accumulates the gradient of the node's output into its parents' slots.
  using BackwardFn = std::function<void(const Matrix& upstream, Gradients& grads)>;
  Tensor record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward);

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  // Sign pattern of every ReLU input seen so far. Two evaluations that share
  // a signature sit on the same linear piece of every ReLU.
  void note_relu_inputs(const Matrix& pre);
  const std::vector<std::uint8_t>& relu_signature() const { return relu_signature_; }

 private:
  friend Gradients backward(Tape& tape, const Tensor& loss);

  struct Node {
    Matrix value;
    bool requires_grad = false;
    std::vector<std::size_t> parents;
    BackwardFn backward;
  };

  Mode mode_;
  // deque keeps value references stable while the tape grows.
  std::deque<Node> nodes_;
  std::vector<std::uint8_t> relu_signature_;
};

// Gradient slots indexed by node id; empty slots mean "zero".
class Gradients {
 public:
  explicit Gradients(const Tape* tape) : tape_(tape), slots_(tape->size()) {}

  // Gradient of the loss with respect to t; zeros when t is off the loss path.
  Matrix of(const Tensor& t) const;
  void accumulate(std::size_t id, const Matrix& g);
  const Matrix* slot(std::size_t id) const { return slots_[id].size() == 0 ? nullptr : &slots_[id]; }

 private:
  const Tape* tape_;
  std::vector<Matrix> slots_;
};

// Reverse-mode sweep from a 1x1 loss. Throws ComputeError for non-scalar loss
// or an inference-mode tape.
Gradients backward(Tape& tape, const Tensor& loss);

// ---- differentiable ops -------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);
// a b^T without materializing the transpose.
Tensor matmul_nt(const Tensor& a, const Tensor& b);
// x x^T; exploits symmetry in both passes.
Tensor gram(const Tensor& x);
// s is captured by reference and must outlive the backward pass.
Tensor spmm(const SparseMatrix& s, const Tensor& d);
// Shares ownership of s with the tape.
Tensor spmm(std::shared_ptr<const SparseMatrix> s, const Tensor& d);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor elu(const Tensor& x, double alpha = 1.0);
Tensor exp(const Tensor& x);
// Throws ComputeError on non-positive input.
Tensor log(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double c);
// x + c with c a constant matrix of the same shape (entries may be -inf).
Tensor add_constant(const Tensor& x, const Matrix& c);
// x (N x d) plus the 1 x d row `bias` added to every row.
Tensor add_row_bias(const Tensor& x, const Tensor& bias);

Tensor transpose(const Tensor& x);
Tensor concat_cols(const Tensor& a, const Tensor& b);
// N x N -> N x 1 diagonal.
Tensor diagonal(const Tensor& x);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
// N x d -> 1 x d column means. Throws on empty input.
Tensor row_mean(const Tensor& x);
// N x d -> N x 1, log sum_j exp(x_ij) with max-shift stabilization.
Tensor logsumexp_rows(const Tensor& x);
// Each row divided by max(||row||_2, eps).
Tensor l2_normalize_rows(const Tensor& x, double eps = 1e-12);

}  // namespace mlgcl::ad
