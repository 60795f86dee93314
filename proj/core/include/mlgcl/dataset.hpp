// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "mlgcl/graph.hpp"

namespace mlgcl {

// Reads a dataset directory:
//   edges.tsv               "src<TAB>dst[<TAB>weight]" per line, '#' comments
//   features.bin | .csv     binary (preferred when both exist) or CSV features
//   labels.tsv              optional, "node<TAB>label"
//   splits.json             optional, {"train": [...], "val": [...], "test": [...]}
// Edges are symmetrized and deduplicated.
Graph load_dataset(const std::filesystem::path& dir);

// Writes edges.tsv (one line per undirected edge, src < dst), features.csv or
// features.bin, and labels/splits when present.
void save_dataset(const Graph& g, const std::filesystem::path& dir, bool binary_features = false);

// "MLGC" magic, u32 rows, u32 cols, rows*cols f32 values, all little-endian.
Matrix read_features_bin(const std::filesystem::path& path);
void write_features_bin(const Matrix& m, const std::filesystem::path& path);

Matrix read_features_csv(const std::filesystem::path& path);

}  // namespace mlgcl
