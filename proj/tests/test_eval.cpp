// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "mlgcl/error.hpp"
#include "mlgcl/eval.hpp"
#include "mlgcl/synthetic.hpp"
#include "oracles.hpp"

namespace mlgcl {
namespace {

ProbeConfig quick_probe(int runs = 3) {
  ProbeConfig cfg;
  cfg.epochs = 150;
  cfg.runs = runs;
  cfg.seed = 5;
  return cfg;
}

TEST(LinearProbe, SeparatedBlobsAreClassifiedPerfectly) {
  const auto blobs = two_blobs(500, 2, 10.0, 1);
  // Brute-force check that a threshold on the shifted coordinate separates the classes.
  double best_gap = -INFINITY;
  for (double cut = 0.0; cut <= 10.0; cut += 0.25) {
    double gap = INFINITY;
    for (Index i = 0; i < blobs.points.rows(); ++i) {
      const double side = blobs.labels[i] == 1 ? blobs.points(i, 0) - cut : cut - blobs.points(i, 0);
      gap = std::min(gap, side);
    }
    best_gap = std::max(best_gap, gap);
  }
  ASSERT_GT(best_gap, 0.0);
  const auto split = stratified_split(blobs.labels, 2);
  EXPECT_DOUBLE_EQ(linear_probe(blobs.points, blobs.labels, split, ProbeConfig{}), 1.0);
}

TEST(LinearProbe, ZeroEmbeddingsPredictTrainMajority) {
  std::vector<int> labels;
  Split split;
  // Train frequencies 6:2:2 favor class 2; test frequencies differ.
  for (int c : {2, 2, 2, 2, 2, 2, 0, 0, 1, 1}) {
    split.train.push_back(static_cast<Index>(labels.size()));
    labels.push_back(c);
  }
  for (int c : {0, 0, 1, 1}) {
    split.val.push_back(static_cast<Index>(labels.size()));
    labels.push_back(c);
  }
  for (int c : {0, 0, 0, 1, 1, 2, 2, 0, 1, 2}) {
    split.test.push_back(static_cast<Index>(labels.size()));
    labels.push_back(c);
  }
  const Matrix z = Matrix::Zero(static_cast<Index>(labels.size()), 3);
  const double majority_share = 3.0 / 10.0;
  EXPECT_DOUBLE_EQ(linear_probe(z, labels, split, quick_probe()), majority_share);
  split.val.clear();
  EXPECT_DOUBLE_EQ(linear_probe(z, labels, split, quick_probe()), majority_share);
}

TEST(LinearProbe, DuplicatedColumnsGiveMatchingAccuracy) {
  const auto g = csbm(CsbmSpec{.nodes = 300, .mean_shift = 0.4}, 3);
  const Matrix& x = g.features();
  Matrix doubled(x.rows(), 2 * x.cols());
  doubled << x, x;
  const auto& labels = *g.labels();
  const double a = linear_probe(x, labels, *g.split(), quick_probe());
  const double b = linear_probe(doubled, labels, *g.split(), quick_probe());
  EXPECT_NEAR(a, b, 0.03);
  EXPECT_EQ(a, linear_probe(x, labels, *g.split(), quick_probe()));
}

TEST(LinearProbe, Errors) {
  const Matrix z = Matrix::Ones(4, 2);
  const std::vector<int> labels{0, 1, 0, 1};
  const Split ok{{0, 1}, {}, {2, 3}};
  EXPECT_THROW(linear_probe(z, {}, ok, quick_probe()), ValidationError);
  EXPECT_THROW(linear_probe(z, labels, Split{{}, {}, {2, 3}}, quick_probe()), ValidationError);
  EXPECT_THROW(linear_probe(z, labels, Split{{0, 1}, {}, {}}, quick_probe()), ValidationError);
  EXPECT_THROW(linear_probe(Matrix::Ones(3, 2), labels, ok, quick_probe()), ValidationError);
  ProbeConfig bad = quick_probe();
  bad.runs = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Evaluate, SingleRunHasZeroStd) {
  const auto blobs = two_blobs(20, 3, 4.0, 1);
  const auto r = evaluate(blobs.points, blobs.labels, std::nullopt, quick_probe(1));
  ASSERT_EQ(r.accuracies.size(), 1u);
  EXPECT_EQ(r.std, 0.0);
  EXPECT_EQ(r.mean, r.accuracies[0]);
}

TEST(Evaluate, SummaryMatchesRecomputation) {
  const auto g = csbm(CsbmSpec{.nodes = 200, .mean_shift = 0.5}, 7);
  const auto r = evaluate(g.features(), *g.labels(), std::nullopt, quick_probe(5));
  ASSERT_EQ(r.accuracies.size(), 5u);
  const double mean = std::accumulate(r.accuracies.begin(), r.accuracies.end(), 0.0) / 5.0;
  double var = 0.0;
  for (double a : r.accuracies) {
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    var += (a - mean) * (a - mean);
  }
  EXPECT_NEAR(r.mean, mean, 1e-12);
  EXPECT_NEAR(r.std, std::sqrt(var / 5.0), 1e-12);
  // Random splits differ per run.
  EXPECT_GT(std::set<double>(r.accuracies.begin(), r.accuracies.end()).size(), 1u);
}

TEST(Evaluate, IdenticalRunsHaveZeroStd) {
  const auto s = summarize({0.8, 0.8, 0.8});
  EXPECT_EQ(s.mean, 0.8);
  EXPECT_EQ(s.std, 0.0);
}

TEST(Evaluate, ReproducibleForFixedSeed) {
  const auto g = csbm(CsbmSpec{.nodes = 120}, 2);
  const auto a = evaluate(g.features(), *g.labels(), std::nullopt, quick_probe(4));
  const auto b = evaluate(g.features(), *g.labels(), std::nullopt, quick_probe(4));
  EXPECT_EQ(a.accuracies, b.accuracies);
}

TEST(Evaluate, InvariantToClassRelabeling) {
  const auto g = csbm(CsbmSpec{.nodes = 300, .mean_shift = 1.5}, 9);
  const auto& labels = *g.labels();
  std::vector<int> relabeled(labels.size());
  const std::vector<int> sigma{2, 0, 1};
  std::transform(labels.begin(), labels.end(), relabeled.begin(), [&](int l) { return sigma[l]; });
  auto cfg = quick_probe(20);
  const auto a = evaluate(g.features(), labels, g.split(), cfg);
  cfg.seed = 99;
  const auto b = evaluate(g.features(), relabeled, g.split(), cfg);
  EXPECT_NEAR(a.mean, b.mean, 0.01);
}

TEST(StratifiedSplit, ProportionsAndDisjointness) {
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c) labels.insert(labels.end(), 50 * (c + 1), c);
  const auto s = stratified_split(labels, 4);
  EXPECT_NO_THROW(validate_split(s, static_cast<Index>(labels.size())));
  EXPECT_EQ(s.train.size() + s.val.size() + s.test.size(), labels.size());
  for (int c = 0; c < 3; ++c) {
    const auto count = [&](const std::vector<Index>& v) {
      return std::count_if(v.begin(), v.end(), [&](Index i) { return labels[i] == c; });
    };
    EXPECT_EQ(count(s.train), 5 * (c + 1));
    EXPECT_EQ(count(s.val), 5 * (c + 1));
  }
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  EXPECT_EQ(stratified_split(labels, 4), s);
  EXPECT_NE(stratified_split(labels, 5), s);
}

TEST(StratifiedSplit, TinyClassStillTrains) {
  const std::vector<int> labels{0, 0, 0, 0, 1};
  const auto s = stratified_split(labels, 1);
  EXPECT_NE(std::find(s.train.begin(), s.train.end(), Index{4}), s.train.end());
}

TEST(CsvWriters, HeadersAndRowCounts) {
  std::ostringstream results;
  std::ostringstream summary;
  const ResultTag tag{"toy", "multi", "knn", 10, 0.5, 1.0, 7};
  const auto r = summarize({0.5, 1.0});
  write_results_header(results);
  write_results_rows(results, tag, r);
  write_summary_header(summary);
  write_summary_row(summary, tag, r);
  const std::string rs = results.str();
  const std::string ss = summary.str();
  EXPECT_EQ(rs.substr(0, rs.find('\n')), "dataset,mode,scheme,k,tau,lambda,seed,run,accuracy");
  EXPECT_EQ(ss.substr(0, ss.find('\n')), "dataset,mode,scheme,mean,std,runs");
  EXPECT_EQ(std::count(rs.begin(), rs.end(), '\n'), 3);
  EXPECT_EQ(std::count(ss.begin(), ss.end(), '\n'), 2);
}

}  // namespace
}  // namespace mlgcl
