// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlgcl/graph.hpp"

namespace mlgcl {

struct ProbeConfig {
  int epochs = 300;
  double lr = 0.01;
  double weight_decay = 1e-4;
  int runs = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RunResult {
  std::vector<double> accuracies;
  double mean = 0.0;
  // Population standard deviation (divides by the number of runs).
  double std = 0.0;
};

RunResult summarize(std::vector<double> accuracies);

// Per-class random 10/10/80 train/val/test split. Every class with at least
// one node contributes at least one training node.
Split stratified_split(std::span<const int> labels, std::uint64_t seed);

// Softmax regression on the train rows of z (columns standardized with train
// statistics), full-batch Adam. Returns the test accuracy at the epoch with the
// best validation accuracy (latest on ties), or after the last epoch when the
// split has no validation nodes.
double linear_probe(const Matrix& z, std::span<const int> labels, const Split& split, const ProbeConfig& cfg);

// cfg.runs probes with seeds derived from cfg.seed. A fixed split is reused by
// every run; without one each run draws its own stratified split.
RunResult evaluate(const Matrix& z, std::span<const int> labels, const std::optional<Split>& split,
                   const ProbeConfig& cfg);

// Identifies one configuration in results.csv / summary.csv.
struct ResultTag {
  std::string dataset;
  std::string mode;
  std::string scheme;
  int k = 0;
  double tau = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

void write_results_header(std::ostream& out);
void write_results_rows(std::ostream& out, const ResultTag& tag, const RunResult& r);
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const ResultTag& tag, const RunResult& r);

}  // namespace mlgcl
