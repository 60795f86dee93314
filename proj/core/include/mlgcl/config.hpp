// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlgcl/eval.hpp"
#include "mlgcl/pipeline.hpp"

namespace mlgcl {

struct AblationGrid {
  std::vector<AugmentScheme> schemes{AugmentScheme::knn};
  std::vector<ContrastMode> modes{ContrastMode::multi, ContrastMode::node_only, ContrastMode::graph_only};
  std::vector<Index> ks{10};
};

// Everything one run needs, loaded from a flat JSON object with dotted keys
// ("loss.tau") plus `--set key=value` overrides.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  TrainConfig train;
  ProbeConfig probe;
  AblationGrid ablate;

  // Propagates `seed` into the train and probe configs.
  void set_seed(std::uint64_t s);
  void validate() const;
};

// All recognised keys, sorted.
std::vector<std::string> config_keys();

// Parses a JSON object; unknown keys and ill-typed values throw
// ValidationError naming the key.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// "key=value". The value is read as JSON when it parses as JSON, otherwise as
// a bare string, then checked against the key's type.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

// Every key with its resolved value, sorted, doubles in round-trip form.
std::string to_json(const ExperimentConfig& cfg);

}  // namespace mlgcl
