// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/model.hpp"

#include <array>
#include <fstream>
#include <string>

#include "mlgcl/error.hpp"
#include "mlgcl/optim.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::elu:
      return "elu";
    case Activation::linear:
      return "linear";
  }
  return "?";
}

Activation parse_activation(std::string_view s) {
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "elu") return Activation::elu;
  if (s == "linear") return Activation::linear;
  throw ValidationError("unknown activation '" + std::string(s) + "' (relu|sigmoid|elu|linear)");
}

ad::Tensor apply_activation(const ad::Tensor& x, Activation a) {
  switch (a) {
    case Activation::relu:
      return ad::relu(x);
    case Activation::sigmoid:
      return ad::sigmoid(x);
    case Activation::elu:
      return ad::elu(x);
    case Activation::linear:
      return x;
  }
  throw ValidationError("unknown activation");
}

EncoderParams EncoderParams::init(Index input_dim, Index dim, std::size_t layers, Activation activation,
                                  std::uint64_t seed) {
  if (layers < 1) throw ValidationError("encoder needs at least one layer");
  EncoderParams p;
  p.activation = activation;
  Index in = input_dim;
  for (std::size_t l = 0; l < layers; ++l) {
    p.weights.push_back(xavier_init(in, dim, derive_seed(seed, l)));
    in = dim;
  }
  return p;
}

HeadParams HeadParams::init(Index dim, std::uint64_t seed) {
  return {xavier_init(dim, dim, derive_seed(seed, 0)), Matrix::Zero(1, dim), xavier_init(dim, dim, derive_seed(seed, 1)),
          Matrix::Zero(1, dim)};
}

HeadParams HeadParams::identity(Index dim) {
  return {Matrix::Identity(dim, dim), Matrix::Zero(1, dim), Matrix::Identity(dim, dim), Matrix::Zero(1, dim)};
}

ProjectionParams ProjectionParams::init(Index dim, Activation activation, std::uint64_t seed) {
  return {HeadParams::init(dim, derive_seed(seed, 0)), HeadParams::init(dim, derive_seed(seed, 1)), activation};
}

std::vector<Matrix*> ModelParams::all() {
  std::vector<Matrix*> out;
  for (auto& w : encoder.weights) out.push_back(&w);
  for (auto* h : {&heads.node, &heads.graph}) {
    out.insert(out.end(), {&h->w1, &h->b1, &h->w2, &h->b2});
  }
  return out;
}

std::vector<const Matrix*> ModelParams::all() const {
  auto mut = const_cast<ModelParams*>(this)->all();
  return {mut.begin(), mut.end()};
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  if (a.encoder.activation != b.encoder.activation || a.heads.activation != b.heads.activation ||
      a.encoder.layers() != b.encoder.layers()) {
    return false;
  }
  const auto pa = a.all();
  const auto pb = b.all();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i]->rows() != pb[i]->rows() || pa[i]->cols() != pb[i]->cols() || *pa[i] != *pb[i]) return false;
  }
  return true;
}

View make_view(std::shared_ptr<const SparseMatrix> adjacency_normalized, Matrix features, double sparse_threshold) {
  if (!adjacency_normalized) throw ValidationError("view needs an adjacency");
  const Index n = features.rows();
  if (adjacency_normalized->rows() != n || adjacency_normalized->cols() != n) {
    throw ValidationError("view adjacency does not match " + std::to_string(n) + " feature rows");
  }
  View v{std::move(adjacency_normalized), std::move(features), nullptr};
  const auto nonzero = (v.features.array() != 0.0).count();
  if (v.features.size() > 0 && static_cast<double>(nonzero) <= sparse_threshold * static_cast<double>(v.features.size())) {
    v.sparse_features = std::make_shared<const SparseMatrix>(SparseMatrix::from_dense(v.features));
  }
  return v;
}

View with_features(const View& v, Matrix features) { return make_view(v.adjacency, std::move(features)); }

ad::Tensor gcn_layer(std::shared_ptr<const SparseMatrix> a_norm, const ad::Tensor& z, const ad::Tensor& w,
                     Activation act) {
  return apply_activation(ad::spmm(a_norm, ad::matmul(z, w)), act);
}

ad::Tensor encode(const View& view, std::span<const ad::Tensor> weights, Activation act) {
  if (weights.empty()) throw ValidationError("encoder has no layers");
  ad::Tape& tape = *weights.front().tape();
  if (weights.front().rows() != view.features.cols()) {
    throw ComputeError("encoder expects " + std::to_string(weights.front().rows()) + " input features, view has " +
                       std::to_string(view.features.cols()));
  }
  ad::Tensor h;
  if (view.sparse_features) {
    // X W with X sparse; same product as matmul on the dense copy.
    h = apply_activation(ad::spmm(view.adjacency, ad::spmm(view.sparse_features, weights.front())), act);
  } else {
    h = gcn_layer(view.adjacency, tape.constant(view.features), weights.front(), act);
  }
  for (std::size_t l = 1; l < weights.size(); ++l) h = gcn_layer(view.adjacency, h, weights[l], act);
  return h;
}

Matrix encode(const View& view, const EncoderParams& params) {
  ad::Tape tape(ad::Tape::Mode::inference);
  std::vector<ad::Tensor> w;
  for (const auto& m : params.weights) w.push_back(tape.constant(m));
  return encode(view, w, params.activation).value();
}

ad::Tensor readout(const ad::Tensor& h) { return ad::sigmoid(ad::row_mean(h)); }

HeadTensors put_on_tape(ad::Tape& tape, const HeadParams& head) {
  return {tape.leaf(head.w1), tape.leaf(head.b1), tape.leaf(head.w2), tape.leaf(head.b2)};
}

ad::Tensor project(const ad::Tensor& x, const HeadTensors& head, Activation act) {
  const auto hidden = apply_activation(ad::add_row_bias(ad::matmul(x, head.w1), head.b1), act);
  return ad::l2_normalize_rows(ad::add_row_bias(ad::matmul(hidden, head.w2), head.b2));
}

namespace {

constexpr std::array<char, 4> kMagic{'M', 'L', 'G', 'P'};

void put_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

std::uint32_t get_u32(std::ifstream& in, const std::filesystem::path& path) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  if (!in) throw IoError(path.string() + ": truncated checkpoint");
  return v;
}

Activation checked_activation(std::uint32_t v, const std::filesystem::path& path) {
  if (v > static_cast<std::uint32_t>(Activation::linear)) throw IoError(path.string() + ": bad activation code");
  return static_cast<Activation>(v);
}

}  // namespace

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  const auto tensors = params.all();
  out.write(kMagic.data(), 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(params.encoder.activation));
  put_u32(out, static_cast<std::uint32_t>(params.heads.activation));
  put_u32(out, static_cast<std::uint32_t>(params.encoder.layers()));
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const Matrix* m : tensors) {
    put_u32(out, static_cast<std::uint32_t>(m->rows()));
    put_u32(out, static_cast<std::uint32_t>(m->cols()));
    out.write(reinterpret_cast<const char*>(m->data()), static_cast<std::streamsize>(m->size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kMagic) throw IoError(path.string() + ": not a checkpoint (bad magic)");
  const auto version = get_u32(in, path);
  if (version != kCheckpointVersion) {
    throw IoError(path.string() + ": checkpoint version " + std::to_string(version) + ", expected " +
                  std::to_string(kCheckpointVersion));
  }
  ModelParams p;
  p.encoder.activation = checked_activation(get_u32(in, path), path);
  p.heads.activation = checked_activation(get_u32(in, path), path);
  const auto layers = get_u32(in, path);
  const auto count = get_u32(in, path);
  if (layers < 1 || count != layers + 8) throw IoError(path.string() + ": inconsistent tensor count");
  p.encoder.weights.resize(layers);
  const auto slots = p.all();
  for (Matrix* m : slots) {
    const auto rows = get_u32(in, path);
    const auto cols = get_u32(in, path);
    m->resize(rows, cols);
    in.read(reinterpret_cast<char*>(m->data()), static_cast<std::streamsize>(m->size() * sizeof(double)));
    if (!in) throw IoError(path.string() + ": truncated checkpoint");
  }
  if (in.peek() != std::ifstream::traits_type::eof()) throw IoError(path.string() + ": trailing bytes in checkpoint");
  const Index dim = p.encoder.output_dim();
  for (std::size_t l = 1; l < p.encoder.layers(); ++l) {
    if (p.encoder.weights[l].rows() != p.encoder.weights[l - 1].cols()) throw IoError(path.string() + ": encoder shapes do not chain");
  }
  for (const auto* h : {&p.heads.node, &p.heads.graph}) {
    if (h->w1.rows() != dim || h->w1.cols() != dim || h->w2.rows() != dim || h->w2.cols() != dim ||
        h->b1.rows() != 1 || h->b1.cols() != dim || h->b2.rows() != 1 || h->b2.cols() != dim) {
      throw IoError(path.string() + ": projection head shapes do not match the encoder");
    }
  }
  return p;
}

}  // namespace mlgcl
