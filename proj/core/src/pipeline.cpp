// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

#include "mlgcl/error.hpp"
#include "mlgcl/optim.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {
namespace {

// Seed streams; epoch-dependent streams are offset by 3 * epoch.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kEpochStreamBase = 1000;
constexpr std::uint64_t kAugmentStream = 0;
constexpr std::uint64_t kShuffleStream = 1;

std::uint64_t epoch_seed(std::uint64_t seed, int epoch, std::uint64_t stream) {
  return derive_seed(seed, kEpochStreamBase + 3 * static_cast<std::uint64_t>(epoch) + stream);
}

}  // namespace

std::string_view to_string(ContrastMode m) {
  switch (m) {
    case ContrastMode::multi:
      return "multi";
    case ContrastMode::node_only:
      return "node_only";
    case ContrastMode::graph_only:
      return "graph_only";
  }
  return "?";
}

ContrastMode parse_contrast_mode(std::string_view s) {
  if (s == "multi") return ContrastMode::multi;
  if (s == "node_only") return ContrastMode::node_only;
  if (s == "graph_only") return ContrastMode::graph_only;
  throw ValidationError("unknown contrast mode '" + std::string(s) + "' (multi|node_only|graph_only)");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ValidationError("train.epochs must be >= 1");
  if (patience < 1) throw ValidationError("train.patience must be >= 1");
  if (!(lr > 0.0)) throw ValidationError("train.lr must be positive");
  if (dim < 1) throw ValidationError("model.dim must be >= 1");
  if (layers < 1) throw ValidationError("model.layers must be >= 1");
  if (refresh_interval < 1) throw ValidationError("aug.refresh must be >= 1");
  view2.validate();
  loss.validate();
}

View topology_view(const Graph& g) {
  return make_view(std::make_shared<const SparseMatrix>(gcn_normalize(g.adjacency())), g.features());
}

View build_feature_view_from(const Matrix& embedding, const View& topology, const AugmentationSpec& spec) {
  const auto knn = knn_graph(similarity_matrix(embedding, spec), spec.k);
  return make_view(std::make_shared<const SparseMatrix>(gcn_normalize(knn)), topology.features);
}

View build_feature_view(const View& topology, const EncoderParams& params, const AugmentationSpec& spec) {
  if (spec.scheme != AugmentScheme::knn) throw ValidationError("build_feature_view needs the knn scheme");
  return build_feature_view_from(encode(topology, params), topology, spec);
}

ModelParams init_params(Index input_dim, const TrainConfig& cfg) {
  const auto seed = derive_seed(cfg.seed, kInitStream);
  return {EncoderParams::init(input_dim, cfg.dim, cfg.layers, cfg.encoder_activation, derive_seed(seed, 0)),
          ProjectionParams::init(cfg.dim, cfg.head_activation, derive_seed(seed, 1))};
}

Objective forward_objective(ad::Tape& tape, const ModelParams& params, const StepInputs& inputs,
                            const TrainConfig& cfg, std::vector<ad::Tensor>* leaves) {
  std::vector<ad::Tensor> tensors;
  for (const Matrix* m : params.all()) tensors.push_back(tape.leaf(*m));
  if (leaves != nullptr) *leaves = tensors;
  return forward_objective(tensors, params.encoder.activation, params.heads.activation, inputs, cfg);
}

Objective forward_objective(std::span<const ad::Tensor> params, Activation encoder_activation,
                            Activation head_activation, const StepInputs& inputs, const TrainConfig& cfg) {
  if (params.size() < 9) throw ValidationError("objective needs at least one encoder weight and 8 head tensors");
  const std::size_t layers = params.size() - 8;
  ad::Tape& tape = *params.front().tape();
  const auto enc = params.first(layers);
  const HeadTensors node_head{params[layers], params[layers + 1], params[layers + 2], params[layers + 3]};
  const HeadTensors graph_head{params[layers + 4], params[layers + 5], params[layers + 6], params[layers + 7]};
  const auto act = encoder_activation;
  const auto head_act = head_activation;
  const View& va = *inputs.view_a;
  const View& vb = *inputs.view_b;

  const auto ha = encode(va, enc, act);
  const auto hb = encode(vb, enc, act);

  const auto zero = tape.constant(Matrix::Zero(1, 1));
  ad::Tensor node_term = zero;
  ad::Tensor graph_term = zero;
  if (cfg.mode != ContrastMode::graph_only) {
    node_term = node_contrastive_loss(project(ha, node_head, head_act), project(hb, node_head, head_act),
                                      cfg.loss.tau, cfg.loss.literal_denominator);
  }
  if (cfg.mode != ContrastMode::node_only) {
    const View ca = with_features(va, permute_rows(va.features, inputs.shuffle));
    const View cb = with_features(vb, permute_rows(vb.features, inputs.shuffle));
    const auto sa = project(readout(ha), graph_head, head_act);
    const auto sb = project(readout(hb), graph_head, head_act);
    const auto ta = project(readout(encode(ca, enc, act)), graph_head, head_act);
    const auto tb = project(readout(encode(cb, enc, act)), graph_head, head_act);
    graph_term = graph_contrastive_loss(sa, sb, ta, tb, cfg.loss.tau);
  }
  switch (cfg.mode) {
    case ContrastMode::multi:
      return multi_level_loss(node_term, graph_term, cfg.loss.lambda);
    case ContrastMode::node_only:
      return multi_level_loss(node_term, zero, 0.0);
    case ContrastMode::graph_only: {
      Objective obj{graph_term, {}};
      obj.report.graph_term = graph_term.item();
      obj.report.total = obj.report.graph_term;
      return obj;
    }
  }
  throw ValidationError("unknown contrast mode");
}

TrainResult train(const Graph& g, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const Index n = g.num_nodes();
  const View topo = topology_view(g);

  ModelParams params = init_params(g.num_features(), cfg);
  const auto slots = params.all();
  AdamState adam(AdamConfig{cfg.lr}, std::vector<const Matrix*>(slots.begin(), slots.end()));

  TrainResult result{params, {}};
  auto& hist = result.history;
  hist.best_objective = -std::numeric_limits<double>::infinity();
  int since_best = 0;

  View view_b = topo;
  for (int e = 0; e < cfg.epochs; ++e) {
    switch (cfg.view2.scheme) {
      case AugmentScheme::knn:
        if (e % cfg.refresh_interval == 0) {
          view_b = (e == 0 && cfg.bootstrap_from_features) ? build_feature_view_from(g.features(), topo, cfg.view2)
                                                           : build_feature_view(topo, params.encoder, cfg.view2);
        }
        break;
      case AugmentScheme::edge_perturbation:
        view_b = make_view(std::make_shared<const SparseMatrix>(gcn_normalize(
                               edge_perturbation(g.adjacency(), cfg.view2.p, epoch_seed(cfg.seed, e, kAugmentStream)))),
                           g.features());
        break;
      case AugmentScheme::attribute_masking:
        view_b = with_features(topo, attribute_masking(g.features(), cfg.view2.p,
                                                       epoch_seed(cfg.seed, e, kAugmentStream), cfg.view2.mask_mode));
        break;
      case AugmentScheme::identity:
        break;
    }

    StepInputs inputs{&topo, &view_b, shuffle_permutation(n, epoch_seed(cfg.seed, e, kShuffleStream))};
    ad::Tape tape;
    std::vector<ad::Tensor> leaves;
    const auto objective = forward_objective(tape, params, inputs, cfg, &leaves);
    if (!std::isfinite(objective.report.total)) {
      throw ComputeError("objective diverged at epoch " + std::to_string(e + 1) + " (node " +
                         std::to_string(objective.report.node_term) + ", graph " +
                         std::to_string(objective.report.graph_term) + ")");
    }
    const auto grads = ad::backward(tape, ad::scale(objective.value, -1.0));

    const EpochRecord rec{e + 1, objective.report};
    hist.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (objective.report.total > hist.best_objective) {
      hist.best_objective = objective.report.total;
      hist.best_epoch = rec.epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      hist.stopped_early = true;
      break;
    }

    std::vector<Matrix> g_list;
    g_list.reserve(leaves.size());
    for (const auto& l : leaves) {
      g_list.push_back(grads.of(l));
      if (!g_list.back().allFinite()) throw ComputeError("non-finite gradient at epoch " + std::to_string(e + 1));
    }
    adam_step(slots, g_list, adam);
  }
  hist.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void write_history_csv(const TrainHistory& history, std::ostream& out) {
  out << "epoch,node_term,graph_term,total\n" << std::setprecision(17);
  for (const auto& r : history.epochs) {
    out << r.epoch << ',' << r.loss.node_term << ',' << r.loss.graph_term << ',' << r.loss.total << '\n';
  }
}

void write_history_csv(const TrainHistory& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_history_csv(history, out);
}

}  // namespace mlgcl
