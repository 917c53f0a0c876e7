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

// End-to-end behavior of the pipeline at the reported operating points.

#include <algorithm>

#include "gtest/gtest.h"

#include "ldprec/experiment.hpp"
#include "ldprec/kmeans.hpp"
#include "ldprec/rng.hpp"

namespace ldprec {
namespace {

ExperimentConfig SweepBase(uint64_t seed) {
  ExperimentConfig c;
  c.dataset.train = 1000;
  c.dataset.validation = 500;
  c.dataset.profiles = 1000;
  c.dataset.archetypes = 4;
  c.dataset.mutation_rate = 0.05;
  c.sessions = 100;
  c.decoder.epochs = 15;
  c.seed = seed;
  return c;
}

TEST(Integration, DecoderReachesReportedQuality) {
  // Session-aggregated pipeline on uniform data; per-class f1 for movies
  // lands near the reported decoding quality at the low-noise operating
  // point, and per-category agreement stays high at the mid-noise one.
  const Taxonomy tax = MakeBuiltinTaxonomy("preference");
  const BloomParams bloom{.m = 144, .k = 3, .n = 27, .f_p = 0.1, .hash_seed = 42};
  RngFactory factory(3);
  const LabeledDataset train =
      GenerateDataset(tax, 2000, std::nullopt, factory.Stream(1).NextU64());
  const LabeledDataset validation =
      GenerateDataset(tax, 1000, std::nullopt, factory.Stream(2).NextU64());

  auto run_point = [&](double epsilon) {
    PrivacyParams priv{.f = 2.0 / (1.0 + std::exp(2.0 * epsilon)), .p = 0.5, .q = 0.75,
                       .k = 3};
    const auto train_inputs =
        RecommenderInputs(train, bloom, priv, 100, factory.Stream(10).NextU64());
    const auto val_inputs =
        RecommenderInputs(validation, bloom, priv, 100, factory.Stream(11).NextU64());
    TrainingSet set;
    set.inputs = train_inputs;
    for (const auto& p : train.profiles) set.labels.push_back(p.selections[0]);
    MlpConfig cfg;
    cfg.input_size = 144;
    cfg.output_size = 7;
    cfg.seed = 5;
    const MlpModel movies = TrainMlp(set, cfg);
    TrainingSet val;
    val.inputs = val_inputs;
    for (const auto& p : validation.profiles) val.labels.push_back(p.selections[0]);
    return Evaluate(movies, val);
  };

  const ClassificationReport low_noise = run_point(2.0);
  for (size_t c = 0; c < low_noise.f1.size(); ++c) {
    EXPECT_GE(low_noise.f1[c], 0.86) << "movies class " << c;
  }

  const ClassificationReport mid_noise = run_point(0.8);
  EXPECT_GE(mid_noise.accuracy, 0.75);
}

TEST(Integration, BloomSizeSweepSaturates) {
  // Accuracy rises with the filter size and levels off around 144 bits.
  ExperimentConfig c = SweepBase(2);
  c.privacy.f = 0.5;
  c.sweep.bloom_size = {48, 96, 144, 192};
  const ExperimentReport report = RunSweep(c, SweepKind::kBloomSize);
  ASSERT_EQ(report.records.size(), 4u);
  const auto acc = [&](size_t i) { return report.records[i].decoder_mean_accuracy; };
  EXPECT_GE(acc(1), acc(0) - 0.02);
  EXPECT_GE(acc(2), acc(1) - 0.02);
  EXPECT_GE(acc(2), acc(0) + 0.02);
  EXPECT_NEAR(acc(3), acc(2), 0.05);
}

TEST(Integration, HashCountSweepDegradesUnderFixedBudget) {
  // With the swept budget held fixed as epsilon1, larger hash counts
  // spread it thinner and accuracy drops.
  ExperimentConfig c = SweepBase(2);
  c.privacy.epsilon = 4.8;
  c.sweep.hash_count = {3, 5, 7, 9};
  const ExperimentReport report = RunSweep(c, SweepKind::kHashCount);
  ASSERT_EQ(report.records.size(), 4u);
  const auto acc = [&](size_t i) { return report.records[i].decoder_mean_accuracy; };
  for (size_t i = 1; i < 4; ++i) EXPECT_LE(acc(i), acc(i - 1) + 0.02) << "k step " << i;
  EXPECT_LE(acc(3), acc(0) - 0.08);
  // Noise parameters grow with k under this mapping.
  EXPECT_LT(report.records[0].f, report.records[3].f);
}

TEST(Integration, SoftFeaturesClusterNoiselessly) {
  ExperimentConfig c = SweepBase(7);
  c.dataset.train = 1200;
  c.decoder.epochs = 20;
  c.privacy.f = 0.0;
  c.privacy.p = 0.0;
  c.privacy.q = 1.0;
  c.sessions = 1;
  c.clustering.soft_features = true;
  const ExperimentReport report = RunPipeline(c);
  EXPECT_GE(report.records[0].clustering_utility, 0.99);
}

TEST(Integration, ClusteringResultCsvShape) {
  Rng rng(4);
  Eigen::MatrixXd points(20, 2);
  for (Eigen::Index i = 0; i < 20; ++i) {
    points(i, 0) = rng.NextDouble();
    points(i, 1) = rng.NextDouble();
  }
  const ClusteringResult result = KMeansCluster(points, 3, 5);
  const std::string csv = result.ToCsv();
  EXPECT_NE(csv.find("K,wcss,iterations"), std::string::npos);
  EXPECT_NE(csv.find("index,assignment"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 23);  // 2 headers + 1 + 20 rows
}

}  // namespace
}  // namespace ldprec
