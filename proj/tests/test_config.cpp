// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <functional>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mlgcl/config.hpp"
#include "mlgcl/error.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {
namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, DefaultsAreValid) {
  const auto cfg = parse_config("{}");
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.train.dim, 512);
  EXPECT_EQ(cfg.train.layers, 2u);
  EXPECT_EQ(cfg.train.view2.k, 10);
  EXPECT_EQ(cfg.train.loss.tau, 0.5);
  EXPECT_EQ(cfg.train.loss.lambda, 1.0);
  EXPECT_EQ(cfg.train.patience, 20);
  EXPECT_EQ(cfg.probe.runs, 20);
}

TEST(Config, UnknownKeyIsNamed) {
  const auto msg = error_of([] { parse_config(R"({"loss.tau": 0.5, "loss.temperature": 1})"); });
  EXPECT_NE(msg.find("loss.temperature"), std::string::npos);
}

TEST(Config, TypeAndRangeErrorsNameTheKey) {
  EXPECT_NE(error_of([] { parse_config(R"({"aug.k": "ten"})"); }).find("aug.k"), std::string::npos);
  EXPECT_NE(error_of([] { parse_config(R"({"train.mode": "both"})"); }).find("train.mode"), std::string::npos);
  EXPECT_THROW(parse_config(R"({"loss.tau": 0})").validate(), ValidationError);
  EXPECT_THROW(parse_config("[1, 2]"), ValidationError);
  EXPECT_THROW(parse_config("{oops"), ValidationError);
}

TEST(Config, EchoRoundTrips) {
  auto cfg = parse_config(R"({"seed": 12, "aug.scheme": "attribute_masking", "aug.mask_mode": "cell",
                              "aug.sigma": 0.7, "loss.literal_denominator": true, "train.mode": "graph_only",
                              "ablate.ks": [3, 5], "ablate.schemes": "knn,edge_perturbation"})");
  const auto echo = to_json(cfg);
  EXPECT_EQ(to_json(parse_config(echo)), echo);
  const auto j = nlohmann::json::parse(echo);
  for (const auto& key : config_keys()) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.size(), config_keys().size());
}

TEST(Config, OverridesParseJsonOrFallBackToString) {
  auto cfg = parse_config("{}");
  apply_override(cfg, "aug.k=4");
  apply_override(cfg, "train.mode=node_only");
  apply_override(cfg, "aug.similarity=\"gaussian\"");
  apply_override(cfg, "ablate.modes=multi,node_only");
  EXPECT_EQ(cfg.train.view2.k, 4);
  EXPECT_EQ(cfg.train.mode, ContrastMode::node_only);
  EXPECT_EQ(cfg.train.view2.similarity, SimilarityKind::gaussian);
  EXPECT_EQ(cfg.ablate.modes.size(), 2u);
  EXPECT_THROW(apply_override(cfg, "aug.k"), ValidationError);
  EXPECT_THROW(apply_override(cfg, "nope=1"), ValidationError);
}

TEST(Config, SeedPropagates) {
  const auto cfg = parse_config(R"({"seed": 41})");
  EXPECT_EQ(cfg.train.seed, 41u);
  EXPECT_EQ(cfg.train.view2.seed, 41u);
  EXPECT_EQ(cfg.probe.seed, derive_seed(41, 7));
}

TEST(Config, EmptyGridIsRejected) {
  EXPECT_THROW(parse_config(R"({"ablate.modes": []})").validate(), ValidationError);
}

}  // namespace
}  // namespace mlgcl
