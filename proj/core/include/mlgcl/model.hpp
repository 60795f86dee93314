// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "mlgcl/graph.hpp"
#include "mlgcl/tensor.hpp"

namespace mlgcl {

enum class Activation : std::uint32_t { relu = 0, sigmoid = 1, elu = 2, linear = 3 };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view s);
ad::Tensor apply_activation(const ad::Tensor& x, Activation a);

// GCN weights W^l, layer l mapping d_{l-1} -> d_l. No bias terms.
struct EncoderParams {
  std::vector<Matrix> weights;
  Activation activation = Activation::relu;

  Index input_dim() const { return weights.empty() ? 0 : weights.front().rows(); }
  Index output_dim() const { return weights.empty() ? 0 : weights.back().cols(); }
  std::size_t layers() const { return weights.size(); }

  // Xavier-initialized stack F -> dim -> ... -> dim.
  static EncoderParams init(Index input_dim, Index dim, std::size_t layers, Activation activation, std::uint64_t seed);
};

// Two-layer map x -> act(x W1 + b1) W2 + b2.
struct HeadParams {
  Matrix w1;
  Matrix b1;
  Matrix w2;
  Matrix b2;

  static HeadParams init(Index dim, std::uint64_t seed);
  static HeadParams identity(Index dim);
};

struct ProjectionParams {
  HeadParams node;
  HeadParams graph;
  Activation activation = Activation::elu;

  static ProjectionParams init(Index dim, Activation activation, std::uint64_t seed);
};

struct ModelParams {
  EncoderParams encoder;
  ProjectionParams heads;

  // Every learnable matrix in a fixed order: encoder layers, node head, graph head.
  std::vector<Matrix*> all();
  std::vector<const Matrix*> all() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b);
};

// One encoder input: a normalized adjacency and the node features. Low-density
// features are also kept in sparse form for the first layer's product.
struct View {
  std::shared_ptr<const SparseMatrix> adjacency;
  Matrix features;
  std::shared_ptr<const SparseMatrix> sparse_features;

  Index num_nodes() const { return features.rows(); }
};

// Validates shapes and builds the sparse feature copy when at most
// `sparse_threshold` of the entries are nonzero.
View make_view(std::shared_ptr<const SparseMatrix> adjacency_normalized, Matrix features,
               double sparse_threshold = 0.1);
// Same adjacency, different features.
View with_features(const View& v, Matrix features);

// act(A (Z W)).
ad::Tensor gcn_layer(std::shared_ptr<const SparseMatrix> a_norm, const ad::Tensor& z, const ad::Tensor& w,
                     Activation act);

// Stacks the layers of `weights` (tape leaves or constants) over the view.
ad::Tensor encode(const View& view, std::span<const ad::Tensor> weights, Activation act);
// Inference-only forward pass.
Matrix encode(const View& view, const EncoderParams& params);

// sigmoid(mean of rows).
ad::Tensor readout(const ad::Tensor& h);

struct HeadTensors {
  ad::Tensor w1, b1, w2, b2;
};

HeadTensors put_on_tape(ad::Tape& tape, const HeadParams& head);
// l2_normalize_rows(act(x W1 + b1) W2 + b2).
ad::Tensor project(const ad::Tensor& x, const HeadTensors& head, Activation act);

// "MLGP" magic, u32 version, u32 encoder activation, u32 head activation,
// u32 encoder layer count, u32 tensor count, then per tensor u32 rows,
// u32 cols and rows*cols f64 values (row-major). Little-endian throughout.
inline constexpr std::uint32_t kCheckpointVersion = 1;
void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace mlgcl
