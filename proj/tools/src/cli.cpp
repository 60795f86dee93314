// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl_cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlgcl/config.hpp"
#include "mlgcl/dataset.hpp"
#include "mlgcl/error.hpp"
#include "mlgcl/eval.hpp"
#include "mlgcl/gradcheck_suite.hpp"
#include "mlgcl/model.hpp"
#include "mlgcl/pipeline.hpp"

namespace mlgcl::cli {
namespace fs = std::filesystem;
namespace {

struct CommonArgs {
  std::string config;
  std::string data;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_common(CLI::App& cmd, CommonArgs& args, bool needs_data, bool needs_out) {
  cmd.add_option("--config", args.config, "JSON config file (flat dotted keys)")->check(CLI::ExistingFile);
  auto* data = cmd.add_option("--data", args.data, "dataset directory");
  if (needs_data) data->required();
  auto* out = cmd.add_option("--out", args.out, "output directory");
  if (needs_out) out->required();
  cmd.add_option("--seed", args.seed, "master seed (overrides the config)");
  cmd.add_option("--set", args.overrides, "override a config key, KEY=VALUE (repeatable)")->allow_extra_args(false);
}

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig cfg = args.config.empty() ? parse_config("{}") : load_config(args.config);
  for (const auto& o : args.overrides) apply_override(cfg, o);
  if (args.seed) cfg.set_seed(*args.seed);
  cfg.validate();
  return cfg;
}

std::string dataset_name(const fs::path& dir) {
  auto p = dir.lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().string();
}

void check_against_data(const TrainConfig& cfg, const Graph& g) {
  if (cfg.view2.scheme == AugmentScheme::knn && cfg.view2.k > g.num_nodes() - 1) {
    throw ValidationError("aug.k = " + std::to_string(cfg.view2.k) + " exceeds N-1 = " +
                          std::to_string(g.num_nodes() - 1));
  }
}

void check_checkpoint(const ModelParams& p, const Graph& g) {
  if (p.encoder.input_dim() != g.num_features()) {
    throw ValidationError("checkpoint expects " + std::to_string(p.encoder.input_dim()) +
                          " input features, dataset has " + std::to_string(g.num_features()));
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

ResultTag tag_for(const std::string& dataset, const ExperimentConfig& cfg) {
  return {dataset,
          std::string(to_string(cfg.train.mode)),
          std::string(to_string(cfg.train.view2.scheme)),
          static_cast<int>(cfg.train.view2.k),
          cfg.train.loss.tau,
          cfg.train.loss.lambda,
          cfg.seed};
}

Matrix embed(const Graph& g, const ModelParams& params) { return encode(topology_view(g), params.encoder); }

const std::vector<int>& require_labels(const Graph& g) {
  if (!g.labels()) throw ValidationError("dataset has no labels.tsv; evaluation needs labels");
  return *g.labels();
}

int cmd_train(const CommonArgs& args, int log_every, std::ostream& out) {
  const auto cfg = resolve(args);
  const Graph g = load_dataset(args.data);
  check_against_data(cfg.train, g);
  fs::create_directories(args.out);
  const fs::path dir(args.out);

  const auto result = train(g, cfg.train, [&](const EpochRecord& r) {
    if (log_every > 0 && r.epoch % log_every == 0) {
      out << "epoch " << r.epoch << " objective " << std::setprecision(6) << r.loss.total << '\n';
    }
  });
  save_checkpoint(result.params, dir / "checkpoint.mlgp");
  write_history_csv(result.history, dir / "history.csv");
  open_out(dir / "config.json") << to_json(cfg);
  const auto& h = result.history;
  out << "trained " << h.epochs.size() << " epochs" << (h.stopped_early ? " (early stop)" : "") << ", best epoch "
      << h.best_epoch << ", objective " << std::setprecision(6) << h.best_objective << ", " << std::fixed
      << std::setprecision(1) << h.wall_seconds << " s\n"
      << std::defaultfloat;
  return kOk;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint, bool raw, std::ostream& out) {
  const auto cfg = resolve(args);
  const Graph g = load_dataset(args.data);
  const auto& labels = require_labels(g);
  ResultTag tag = tag_for(dataset_name(args.data), cfg);
  Matrix z;
  if (raw) {
    z = g.features();
    tag.mode = "raw_features";
    tag.scheme = "none";
  } else {
    if (checkpoint.empty()) throw ValidationError("eval needs --checkpoint (or --raw-features)");
    const auto params = load_checkpoint(checkpoint);
    check_checkpoint(params, g);
    z = embed(g, params);
  }
  const auto result = evaluate(z, labels, g.split(), cfg.probe);
  fs::create_directories(args.out);
  const fs::path dir(args.out);
  {
    auto f = open_out(dir / "results.csv");
    write_results_header(f);
    write_results_rows(f, tag, result);
  }
  {
    auto f = open_out(dir / "summary.csv");
    write_summary_header(f);
    write_summary_row(f, tag, result);
  }
  out << tag.dataset << ' ' << tag.mode << ' ' << tag.scheme << ": accuracy " << std::fixed << std::setprecision(4)
      << result.mean << " +- " << result.std << " over " << result.accuracies.size() << " runs\n"
      << std::defaultfloat;
  return kOk;
}

int cmd_ablate(const CommonArgs& args, std::ostream& out, std::ostream& err) {
  const auto base = resolve(args);
  const Graph g = load_dataset(args.data);
  const auto& labels = require_labels(g);
  const auto dataset = dataset_name(args.data);
  fs::create_directories(args.out);
  const fs::path dir(args.out);
  auto results = open_out(dir / "results.csv");
  auto summary = open_out(dir / "summary.csv");
  write_results_header(results);
  write_summary_header(summary);

  bool any_failed = false;
  for (const auto scheme : base.ablate.schemes) {
    for (const auto mode : base.ablate.modes) {
      for (const Index k : base.ablate.ks) {
        ExperimentConfig cfg = base;
        cfg.train.view2.scheme = scheme;
        cfg.train.mode = mode;
        cfg.train.view2.k = k;
        const auto tag = tag_for(dataset, cfg);
        out << "cell scheme=" << tag.scheme << " mode=" << tag.mode << " k=" << k << ": " << std::flush;
        try {
          cfg.validate();
          check_against_data(cfg.train, g);
          const auto trained = train(g, cfg.train);
          const auto r = evaluate(embed(g, trained.params), labels, g.split(), cfg.probe);
          write_results_rows(results, tag, r);
          write_summary_row(summary, tag, r);
          out << std::fixed << std::setprecision(4) << r.mean << " +- " << r.std << '\n' << std::defaultfloat;
        } catch (const std::exception& e) {
          any_failed = true;
          RunResult failed;
          failed.mean = std::numeric_limits<double>::quiet_NaN();
          failed.std = std::numeric_limits<double>::quiet_NaN();
          write_summary_row(summary, tag, failed);
          out << "FAILED\n";
          err << "ablate: cell scheme=" << tag.scheme << " mode=" << tag.mode << " k=" << k << " failed: " << e.what()
              << '\n';
        }
        results.flush();
        summary.flush();
      }
    }
  }
  return any_failed ? kCompute : kOk;
}

int cmd_gradcheck(std::uint64_t seed, const std::string& fault, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const auto results = run_gradcheck(gradcheck_suite(seed), fault);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    out << std::left << std::setw(32) << r.name << " max_rel_err " << std::scientific << std::setprecision(3)
        << r.report.max_rel_error << std::defaultfloat << "  checked " << r.report.checked << "  skipped "
        << r.report.skipped << "  " << (r.passed ? "PASS" : "FAIL") << '\n';
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << "gradcheck " << (ok ? "PASS" : "FAIL") << ": " << results.size() << " cases, tolerance "
      << kGradcheckTolerance << ", " << std::fixed << std::setprecision(2) << secs << " s\n"
      << std::defaultfloat;
  return ok ? kOk : kGradcheck;
}

int cmd_export(const CommonArgs& args, const std::string& checkpoint, std::ostream& out) {
  const Graph g = load_dataset(args.data);
  const auto params = load_checkpoint(checkpoint);
  check_checkpoint(params, g);
  const Matrix z = embed(g, params);
  fs::create_directories(args.out);
  const auto path = fs::path(args.out) / "embeddings.bin";
  write_features_bin(z, path);
  out << "wrote " << z.rows() << " x " << z.cols() << " embeddings to " << path.string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-level graph contrastive learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mlgcl 0.1.0");

  CommonArgs train_args, eval_args, ablate_args, export_args;
  int log_every = 0;
  auto* train_cmd = app.add_subcommand("train", "train an encoder; writes checkpoint.mlgp, history.csv, config.json");
  add_common(*train_cmd, train_args, true, true);
  train_cmd->add_option("--log-every", log_every, "print the objective every N epochs")->check(CLI::NonNegativeNumber);

  std::string eval_checkpoint;
  bool raw_features = false;
  auto* eval_cmd = app.add_subcommand("eval", "linear-probe evaluation; writes results.csv and summary.csv");
  add_common(*eval_cmd, eval_args, true, true);
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint written by train");
  eval_cmd->add_flag("--raw-features", raw_features, "probe the raw features instead of embeddings");

  auto* ablate_cmd = app.add_subcommand("ablate", "train+eval over ablate.schemes x ablate.modes x ablate.ks");
  add_common(*ablate_cmd, ablate_args, true, true);

  std::uint64_t gc_seed = 0;
  std::string fault;
  auto* gc_cmd = app.add_subcommand("gradcheck", "finite-difference check of every differentiable op");
  gc_cmd->add_option("--seed", gc_seed, "seed for the random test inputs");
  gc_cmd->add_option("--inject-fault", fault, "perturb the analytic gradient of one case")->group("");

  std::string export_checkpoint;
  auto* export_cmd = app.add_subcommand("export-embeddings", "write frozen-encoder embeddings as embeddings.bin");
  add_common(*export_cmd, export_args, true, true);
  export_cmd->add_option("--checkpoint", export_checkpoint, "checkpoint written by train")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*train_cmd) return cmd_train(train_args, log_every, out);
    if (*eval_cmd) return cmd_eval(eval_args, eval_checkpoint, raw_features, out);
    if (*ablate_cmd) return cmd_ablate(ablate_args, out, err);
    if (*gc_cmd) return cmd_gradcheck(gc_seed, fault, out);
    if (*export_cmd) return cmd_export(export_args, export_checkpoint, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ComputeError& e) {
    err << "compute error: " << e.what() << '\n';
    return kCompute;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCompute;
  }
  return kValidation;
}

}  // namespace mlgcl::cli
