// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "mlgcl/augment.hpp"
#include "mlgcl/graph.hpp"
#include "mlgcl/loss.hpp"
#include "mlgcl/model.hpp"

namespace mlgcl {

enum class ContrastMode { multi, node_only, graph_only };

std::string_view to_string(ContrastMode m);
ContrastMode parse_contrast_mode(std::string_view s);

struct TrainConfig {
  int epochs = 2000;
  double lr = 1e-3;
  int patience = 20;
  Index dim = 512;
  std::size_t layers = 2;
  Activation encoder_activation = Activation::relu;
  Activation head_activation = Activation::elu;

  // Second view. For knn the graph is rebuilt from the current encoder every
  // `refresh_interval` epochs; perturbation schemes resample every epoch.
  AugmentationSpec view2;
  int refresh_interval = 5;
  // Build the first kNN view from raw features instead of the untrained encoder.
  bool bootstrap_from_features = false;

  LossConfig loss;
  ContrastMode mode = ContrastMode::multi;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  LossReport loss;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_objective = 0.0;
  bool stopped_early = false;
  double wall_seconds = 0.0;
};

struct TrainResult {
  // Parameters that produced the best objective.
  ModelParams params;
  TrainHistory history;
};

// Topology view: GCN-normalized input adjacency with the raw features.
View topology_view(const Graph& g);

// Feature-space view: kNN graph over the encoder output of `topology` (run
// without gradient recording), paired with the original features.
View build_feature_view(const View& topology, const EncoderParams& params, const AugmentationSpec& spec);
// Same construction over an arbitrary embedding matrix.
View build_feature_view_from(const Matrix& embedding, const View& topology, const AugmentationSpec& spec);

// Everything one optimization step needs besides the parameters.
struct StepInputs {
  const View* view_a = nullptr;
  const View* view_b = nullptr;
  // Row permutation used to build the corrupted (negative) encodings.
  std::vector<Index> shuffle;
};

// Forward pass of the multi-level objective on `tape`. Parameters are placed
// on the tape as leaves, in ModelParams::all() order, and returned through
// `leaves` when non-null.
Objective forward_objective(ad::Tape& tape, const ModelParams& params, const StepInputs& inputs,
                            const TrainConfig& cfg, std::vector<ad::Tensor>* leaves = nullptr);
// Same objective over parameter tensors already on the tape, in
// ModelParams::all() order (encoder weights, then 8 head tensors).
Objective forward_objective(std::span<const ad::Tensor> params, Activation encoder_activation,
                            Activation head_activation, const StepInputs& inputs, const TrainConfig& cfg);

using EpochCallback = std::function<void(const EpochRecord&)>;

// Full-batch training with early stopping on the objective. Throws
// ComputeError when the objective or a gradient becomes non-finite.
TrainResult train(const Graph& g, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// Fresh parameters for a graph with `input_dim` features.
ModelParams init_params(Index input_dim, const TrainConfig& cfg);

// "epoch,node_term,graph_term,total" rows with round-trip precision.
void write_history_csv(const TrainHistory& history, std::ostream& out);
void write_history_csv(const TrainHistory& history, const std::filesystem::path& path);

}  // namespace mlgcl
