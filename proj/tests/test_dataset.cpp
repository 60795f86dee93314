// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>

#include <gtest/gtest.h>

#include "mlgcl/dataset.hpp"
#include "mlgcl/error.hpp"
#include "mlgcl/synthetic.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace mlgcl {
namespace {

using testing::TempDir;
using testing::write_file;

void write_identity_pair(const TempDir& dir, const std::string& edges) {
  write_file(dir / "edges.tsv", edges);
  write_file(dir / "features.csv", "1,0\n0,1\n");
}

TEST(LoadDataset, SingleEdgeIdentityFeatures) {
  TempDir dir;
  write_identity_pair(dir, "0\t1\n");
  const auto g = load_dataset(dir.path());
  EXPECT_EQ(g.num_nodes(), 2);
  EXPECT_EQ(g.adjacency().nnz(), 2u);
  EXPECT_EQ(g.features(), Matrix(Matrix::Identity(2, 2)));
  EXPECT_FALSE(g.labels().has_value());
  EXPECT_FALSE(g.split().has_value());
}

TEST(LoadDataset, MirroredEdgesAreDeduplicated) {
  TempDir dir;
  write_identity_pair(dir, "0\t1\n1\t0\n");
  EXPECT_EQ(load_dataset(dir.path()).adjacency().nnz(), 2u);
}

TEST(LoadDataset, EveryEdgeHasItsMirror) {
  TempDir dir;
  write_file(dir / "edges.tsv", "# comment\n0\t1\n2\t1\n3\t0\n1\t3\t2.5\n");
  write_file(dir / "features.csv", "1\n2\n3\n4\n");
  const auto a = load_dataset(dir.path()).adjacency();
  for (const auto& t : a.triplets()) EXPECT_DOUBLE_EQ(a.at(t.col, t.row), t.value);
  EXPECT_DOUBLE_EQ(a.at(3, 1), 2.5);
}

TEST(LoadDataset, BundledToyGraph) {
  const auto g = load_dataset(MLGCL_TOY_DIR);
  EXPECT_EQ(g, toy_graph());
  EXPECT_EQ(g.num_classes(), 2);
}

TEST(LoadDataset, MissingFiles) {
  TempDir dir;
  EXPECT_THROW(load_dataset(dir / "nope"), IoError);
  EXPECT_THROW(load_dataset(dir.path()), IoError);
  write_file(dir / "edges.tsv", "0\t1\n");
  EXPECT_THROW(load_dataset(dir.path()), IoError);
}

TEST(LoadDataset, EdgeIndexOutOfRange) {
  TempDir dir;
  write_identity_pair(dir, "0\t2\n");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
}

TEST(LoadDataset, NonNumericFeatureCell) {
  TempDir dir;
  write_file(dir / "edges.tsv", "0\t1\n");
  write_file(dir / "features.csv", "1,0\n0,abc\n");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
}

TEST(LoadDataset, RaggedFeatureRows) {
  TempDir dir;
  write_file(dir / "edges.tsv", "0\t1\n");
  write_file(dir / "features.csv", "1,0\n0\n");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
}

TEST(LoadDataset, LabelErrors) {
  TempDir dir;
  write_identity_pair(dir, "0\t1\n");
  write_file(dir / "labels.tsv", "0\t0\n");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
  write_file(dir / "labels.tsv", "0\t0\n1\t2\n");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
  write_file(dir / "labels.tsv", "0\t0\n5\t1\n");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
  write_file(dir / "labels.tsv", "0\t1\n1\t0\n");
  EXPECT_EQ(*load_dataset(dir.path()).labels(), (std::vector<int>{1, 0}));
}

TEST(LoadDataset, SplitErrors) {
  TempDir dir;
  write_identity_pair(dir, "0\t1\n");
  write_file(dir / "splits.json", R"({"train":[0],"test":[1]})");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
  write_file(dir / "splits.json", R"({"train":[0],"val":[],"test":[0]})");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
  write_file(dir / "splits.json", R"({"train":[0],"val":[],"test":[7]})");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
  write_file(dir / "splits.json", "{not json");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
  write_file(dir / "splits.json", R"({"train":[0],"val":[],"test":[1]})");
  EXPECT_EQ(load_dataset(dir.path()).split()->test, std::vector<Index>{1});
}

TEST(SaveDataset, CsvAndBinaryRoundTrip) {
  const auto g = csbm(CsbmSpec{.nodes = 40, .classes = 2, .feature_dim = 5}, 11);
  TempDir csv_dir;
  save_dataset(g, csv_dir.path());
  EXPECT_EQ(load_dataset(csv_dir.path()), g);

  TempDir bin_dir;
  save_dataset(g, bin_dir.path(), true);
  const auto back = load_dataset(bin_dir.path());
  EXPECT_EQ(back.adjacency(), g.adjacency());
  EXPECT_EQ(back.features(), Matrix(g.features().cast<float>().cast<double>()));
}

TEST(FeaturesBin, BadMagicAndTruncation) {
  TempDir dir;
  const auto p = dir / "f.bin";
  write_features_bin(oracle::random_matrix(3, 4, 1), p);
  auto bytes = testing::read_file(p);
  ASSERT_EQ(bytes.size(), 12u + 3 * 4 * 4);

  write_file(p, bytes.substr(0, bytes.size() - 1));
  EXPECT_THROW(read_features_bin(p), ValidationError);
  write_file(p, bytes.substr(0, 6));
  EXPECT_THROW(read_features_bin(p), ValidationError);
  bytes[0] = 'X';
  write_file(p, bytes);
  EXPECT_THROW(read_features_bin(p), ValidationError);
}

}  // namespace
}  // namespace mlgcl
