// Copyright 2026 The ldprec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldprec/experiment.hpp"

#include <stdexcept>

#include "gtest/gtest.h"

namespace ldprec {
namespace {

// Small sizes so end-to-end runs stay fast in unit tests.
ExperimentConfig TinyConfig() {
  ExperimentConfig c;
  c.dataset.train = 300;
  c.dataset.validation = 150;
  c.dataset.profiles = 400;
  c.dataset.archetypes = 4;
  c.dataset.mutation_rate = 0.05;
  c.decoder.epochs = 4;
  c.clustering.K = 4;
  c.seed = 5;
  return c;
}

TEST(ExperimentConfig, JsonRoundTrip) {
  ExperimentConfig c = TinyConfig();
  c.privacy.epsilon = 1.25;
  c.privacy.epsilon_scale = 2.0;
  c.sweep.epsilon = {0.1, 0.9};
  const ExperimentConfig parsed = ExperimentConfig::FromJsonText(c.ToJsonText());
  EXPECT_EQ(parsed.ToJsonText(), c.ToJsonText());
  EXPECT_EQ(parsed.Hash(), c.Hash());
}

TEST(ExperimentConfig, DefaultsAndOverrides) {
  const ExperimentConfig c = ExperimentConfig::FromJsonText("{}");
  EXPECT_EQ(c.taxonomy, "preference");
  EXPECT_EQ(c.dataset.train, 2000u);
  EXPECT_EQ(c.bloom.k, 3u);
  ASSERT_TRUE(c.bloom.m.has_value());
  EXPECT_EQ(*c.bloom.m, 144u);

  const ExperimentConfig d =
      ExperimentConfig::FromJsonText(R"({"bloom": {"m": null, "f_p": 0.1}})");
  EXPECT_FALSE(d.bloom.m.has_value());
  const Taxonomy tax = MakeBuiltinTaxonomy("preference");
  EXPECT_EQ(d.ResolveBloom(tax).m, 130u);  // optimal size for n = 27
}

TEST(ExperimentConfig, HashDistinguishesConfigs) {
  ExperimentConfig a = TinyConfig();
  ExperimentConfig b = TinyConfig();
  EXPECT_EQ(a.Hash(), b.Hash());
  b.privacy.epsilon = 2.22;
  EXPECT_NE(a.Hash(), b.Hash());
}

TEST(ExperimentConfig, ValidationErrors) {
  ExperimentConfig c = TinyConfig();
  c.bloom.f_p = 0.1;  // both m and f_p set
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c.bloom.m.reset();
  EXPECT_NO_THROW(c.Validate());
  c.bloom.f_p.reset();
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

TEST(ExperimentConfig, PrivacyResolution) {
  ExperimentConfig c = TinyConfig();
  // Default: swept epsilon is the permanent budget epsilon1.
  c.privacy.epsilon = 0.9;
  c.privacy.epsilon_scale = 0.0;
  PrivacyParams p = c.ResolvePrivacy();
  EXPECT_NEAR(p.f, FOfEpsilon1(0.9, c.bloom.k), 1e-15);
  EXPECT_NEAR(Epsilon1OfF(p.f, c.bloom.k), 0.9, 1e-12);

  // Calibrated scale.
  c.privacy.epsilon_scale = 2.0;
  p = c.ResolvePrivacy();
  EXPECT_NEAR(p.f, 2.0 / (1.0 + std::exp(1.8)), 1e-15);

  // Explicit f wins.
  c.privacy.f = 0.37;
  p = c.ResolvePrivacy();
  EXPECT_DOUBLE_EQ(p.f, 0.37);
}

TEST(ExperimentConfig, FullScale) {
  ExperimentConfig c = TinyConfig();
  c.ApplyFullScale();
  EXPECT_EQ(c.dataset.train, 3000u);
  EXPECT_EQ(c.dataset.validation, 1500u);
  EXPECT_EQ(c.dataset.profiles, 4000u);
}

TEST(RunPipeline, NoiselessConfigIsLossless) {
  ExperimentConfig c = TinyConfig();
  c.privacy.f = 0.0;
  c.privacy.p = 0.0;
  c.privacy.q = 1.0;
  c.dataset.train = 1200;
  c.decoder.epochs = 20;
  const ExperimentReport report = RunPipeline(c);
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_GE(report.records[0].decoder_mean_accuracy, 0.99);
  EXPECT_GE(report.records[0].clustering_utility, 0.99);
}

TEST(RunPipeline, ByteIdenticalUnderSameConfigAndSeed) {
  const ExperimentConfig c = TinyConfig();
  const std::string a = RunPipeline(c).ToJsonText();
  const std::string b = RunPipeline(c).ToJsonText();
  EXPECT_EQ(a, b);
}

TEST(RunPipeline, RecordCarriesTrueBudgets) {
  ExperimentConfig c = TinyConfig();
  c.privacy.epsilon = 0.8;
  c.privacy.epsilon_scale = 2.0;
  const ExperimentReport report = RunPipeline(c);
  const GridRecord& r = report.records[0];
  EXPECT_EQ(report.config_hash, c.Hash());
  EXPECT_NEAR(r.f, 2.0 / (1.0 + std::exp(1.6)), 1e-12);
  EXPECT_NEAR(r.epsilon1, Epsilon1OfF(r.f, c.bloom.k), 1e-9);
  EXPECT_NEAR(r.epsilon2, Epsilon2Of(r.f, r.p, r.q, c.bloom.k), 1e-9);
}

TEST(RunSweep, RecordsSortedAndComplete) {
  ExperimentConfig c = TinyConfig();
  c.decoder.epochs = 2;
  c.sweep.epsilon = {1.2, 0.3};
  const ExperimentReport report = RunSweep(c, SweepKind::kEpsilon);
  ASSERT_EQ(report.records.size(), 2u);
  EXPECT_DOUBLE_EQ(report.records[0].grid_value, 0.3);
  EXPECT_DOUBLE_EQ(report.records[1].grid_value, 1.2);
  for (const auto& r : report.records) {
    EXPECT_EQ(r.sweep_name, "epsilon");
    EXPECT_EQ(r.decoder_accuracy.size(), 3u);
  }
}

TEST(RunSweep, BloomSizeChangesGeometry) {
  ExperimentConfig c = TinyConfig();
  c.decoder.epochs = 2;
  c.sweep.bloom_size = {48, 96};
  const ExperimentReport report = RunSweep(c, SweepKind::kBloomSize);
  ASSERT_EQ(report.records.size(), 2u);
  EXPECT_EQ(report.records[0].sweep_name, "bloom_size");
}

TEST(RunTradeoff, ReportsNoIntersectionWhenCurvesDoNotCross) {
  ExperimentConfig c = TinyConfig();
  c.decoder.epochs = 2;
  // At tiny budgets the utility stays far below privacy.
  c.sweep.epsilon = {0.05, 0.1};
  c.privacy.epsilon_scale = 2.0;
  const ExperimentReport report = RunTradeoff(c);
  EXPECT_FALSE(report.has_intersection);
  ASSERT_EQ(report.records.size(), 2u);
  for (const auto& r : report.records) {
    EXPECT_GE(r.attack_success, 0.0);
    EXPECT_LE(r.attack_success, 1.0);
  }
}

TEST(ExperimentReport, JsonSchemaValidates) {
  ExperimentConfig c = TinyConfig();
  c.decoder.epochs = 2;
  const ExperimentReport report = RunPipeline(c);
  const std::string text = report.ToJsonText();
  EXPECT_NO_THROW(ValidateReportJson(text));

  const ExperimentReport parsed = ExperimentReport::FromJsonText(text);
  EXPECT_EQ(parsed.ToJsonText(), text);

  EXPECT_THROW(ValidateReportJson("{}"), std::runtime_error);
  EXPECT_THROW(ValidateReportJson(R"({"config_hash": 3, "seed": 1, "records": [],
                                     "has_intersection": false})"),
               std::runtime_error);
}

TEST(RecommenderInputs, SessionsSharpenTheChannel) {
  const Taxonomy tax = MakeBuiltinTaxonomy("preference");
  const LabeledDataset ds = GenerateDataset(tax, 200, std::nullopt, 3);
  BloomParams bloom{.m = 144, .k = 3, .n = 27, .f_p = 0.1, .hash_seed = 42};
  PrivacyParams priv{.f = 0.3, .p = 0.5, .q = 0.75, .k = 3};

  const auto one = RecommenderInputs(ds, bloom, priv, 1, 9);
  const auto many = RecommenderInputs(ds, bloom, priv, 200, 9);
  ASSERT_EQ(one.size(), 200u);
  ASSERT_EQ(many.size(), 200u);

  // Aggregation recovers the permanent response far better than a single
  // report matches the clean filter.
  size_t errors_many = 0, errors_one = 0, bits = 0;
  for (size_t i = 0; i < 200; ++i) {
    const BitVector b = BloomEncode(ProfileValues(tax, ds.profiles[i]), bloom);
    errors_one += one[i].HammingDistance(b);
    errors_many += many[i].HammingDistance(b);
    bits += bloom.m;
  }
  EXPECT_LT(static_cast<double>(errors_many) / bits, 0.5 * errors_one / bits);
}

}  // namespace
}  // namespace ldprec
