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

#include "ldprec/mlp.hpp"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"

#include "ldprec/bloom.hpp"
#include "ldprec/dataset.hpp"
#include "ldprec/rng.hpp"

namespace ldprec {
namespace {

// Labeled noiseless Bloom encodings of full profiles.
TrainingSet NoiselessSet(const Taxonomy& tax, const BloomParams& bloom, size_t count,
                         size_t category, uint64_t seed) {
  const LabeledDataset ds = GenerateDataset(tax, count, std::nullopt, seed);
  TrainingSet set;
  set.inputs.reserve(count);
  set.labels.reserve(count);
  for (const auto& p : ds.profiles) {
    std::vector<std::string> values;
    for (size_t j = 0; j < p.selections.size(); ++j) {
      values.push_back(tax.categories[j].classes[p.selections[j]]);
    }
    set.inputs.push_back(BloomEncode(values, bloom));
    set.labels.push_back(p.selections[category]);
  }
  return set;
}

MlpConfig SmallConfig(size_t input, size_t output, uint64_t seed) {
  MlpConfig cfg;
  cfg.input_size = input;
  cfg.hidden1_size = 10;
  cfg.hidden2_size = 8;
  cfg.output_size = output;
  cfg.dropout_rate = 0.0;
  cfg.epochs = 5;
  cfg.batch_size = 16;
  cfg.seed = seed;
  return cfg;
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  // Central finite differences on individual parameters, dropout off,
  // float64: relative error < 1e-4.
  MlpConfig cfg = SmallConfig(6, 3, 4);
  cfg.hidden1_size = 5;
  cfg.hidden2_size = 4;

  TrainingSet tiny;
  Rng rng(19);
  for (int i = 0; i < 8; ++i) {
    BitVector bv(6);
    for (size_t j = 0; j < 6; ++j) bv.Set(j, rng.Bernoulli(0.5));
    tiny.inputs.push_back(bv);
    tiny.labels.push_back(rng.NextBelow(3));
  }
  cfg.epochs = 1;
  MlpModel model = TrainMlp(tiny, cfg);

  const Eigen::MatrixXd x = ToMatrix(tiny.inputs);
  const auto grads = internal::LossAndGradients(model, x, tiny.labels);

  const double h = 1e-6;
  // Probe several parameters in every layer, weights and biases.
  for (int l = 0; l < 3; ++l) {
    for (int probe = 0; probe < 4; ++probe) {
      const Eigen::Index r = probe % model.weights[l].rows();
      const Eigen::Index c = (probe * 7 + 3) % model.weights[l].cols();
      MlpModel plus = model, minus = model;
      plus.weights[l](r, c) += h;
      minus.weights[l](r, c) -= h;
      const double numeric = (internal::MeanLoss(plus, x, tiny.labels) -
                              internal::MeanLoss(minus, x, tiny.labels)) /
                             (2 * h);
      const double analytic = grads.weight_grads[l](r, c);
      const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
      EXPECT_LT(std::abs(numeric - analytic) / scale, 1e-4)
          << "layer " << l << " weight (" << r << "," << c << ")";
    }
    const Eigen::Index bi = l % model.biases[l].size();
    MlpModel plus = model, minus = model;
    plus.biases[l](bi) += h;
    minus.biases[l](bi) -= h;
    const double numeric = (internal::MeanLoss(plus, x, tiny.labels) -
                            internal::MeanLoss(minus, x, tiny.labels)) /
                           (2 * h);
    const double analytic = grads.bias_grads[l](bi);
    const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
    EXPECT_LT(std::abs(numeric - analytic) / scale, 1e-4) << "layer " << l << " bias " << bi;
  }
}

TEST(Mlp, SoftmaxNormalized) {
  MlpConfig cfg = SmallConfig(12, 5, 8);
  TrainingSet set;
  Rng rng(20);
  for (int i = 0; i < 40; ++i) {
    BitVector bv(12);
    for (size_t j = 0; j < 12; ++j) bv.Set(j, rng.Bernoulli(0.3));
    set.inputs.push_back(bv);
    set.labels.push_back(rng.NextBelow(5));
  }
  const MlpModel model = TrainMlp(set, cfg);
  for (int i = 0; i < 10; ++i) {
    BitVector bv(12);
    for (size_t j = 0; j < 12; ++j) bv.Set(j, rng.Bernoulli(0.5));
    const auto [label, probs] = Predict(model, bv);
    EXPECT_NEAR(probs.sum(), 1.0, 1e-9);
    EXPECT_GE(probs.minCoeff(), 0.0);
    EXPECT_LT(label, 5u);
  }
}

TEST(Mlp, UniformLogitsTieBreaksToZero) {
  MlpConfig cfg = SmallConfig(4, 3, 1);
  MlpModel model;
  model.config = cfg;
  model.weights = {Eigen::MatrixXd::Zero(10, 4), Eigen::MatrixXd::Zero(8, 10),
                   Eigen::MatrixXd::Zero(3, 8)};
  model.biases = {Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(8),
                  Eigen::VectorXd::Zero(3)};
  BitVector bv(4);
  bv.Set(1);
  const auto [label, probs] = Predict(model, bv);
  EXPECT_EQ(label, 0u);
  EXPECT_NEAR(probs(0), 1.0 / 3, 1e-12);
}

TEST(Mlp, DeterministicUnderSeed) {
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  BloomParams bloom{.m = 64, .k = 3, .n = 27, .f_p = 0.1, .hash_seed = 5};
  const TrainingSet set = NoiselessSet(tax, bloom, 300, 1, 8);

  MlpConfig cfg;
  cfg.input_size = 64;
  cfg.output_size = 8;
  cfg.epochs = 3;
  cfg.dropout_rate = 0.2;
  cfg.seed = 99;
  const MlpModel a = TrainMlp(set, cfg);
  const MlpModel b = TrainMlp(set, cfg);
  for (int l = 0; l < 3; ++l) {
    ASSERT_TRUE(a.weights[l] == b.weights[l]) << "layer " << l;  // bit-exact
    ASSERT_TRUE(a.biases[l] == b.biases[l]) << "layer " << l;
  }
  ASSERT_EQ(a.epoch_losses, b.epoch_losses);
}

TEST(Mlp, TrainingLossDecreases) {
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  BloomParams bloom{.m = 144, .k = 3, .n = 27, .f_p = 0.1, .hash_seed = 5};
  const TrainingSet set = NoiselessSet(tax, bloom, 1500, 0, 9);

  MlpConfig cfg;
  cfg.input_size = 144;
  cfg.output_size = 7;
  cfg.epochs = 12;
  cfg.seed = 4;
  const MlpModel model = TrainMlp(set, cfg);
  ASSERT_EQ(model.epoch_losses.size(), 12u);
  int violations = 0;
  for (size_t e = 1; e < model.epoch_losses.size(); ++e) {
    if (model.epoch_losses[e] > model.epoch_losses[e - 1] + 0.05) ++violations;
  }
  EXPECT_LE(violations, 2);
  EXPECT_LT(model.epoch_losses.back(), model.epoch_losses.front());
}

TEST(Mlp, LearnsNoiselessEncodings) {
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  BloomParams bloom{.m = 144, .k = 3, .n = 27, .f_p = 0.1, .hash_seed = 5};
  const TrainingSet train = NoiselessSet(tax, bloom, 1500, 1, 10);
  const TrainingSet test = NoiselessSet(tax, bloom, 400, 1, 11);

  MlpConfig cfg;
  cfg.input_size = 144;
  cfg.output_size = 8;
  cfg.seed = 1;
  const MlpModel model = TrainMlp(train, cfg);
  const auto report = Evaluate(model, test);
  EXPECT_GE(report.accuracy, 0.99);

  // Per-sample agreement with the exact-encoding lookup oracle.
  for (size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(Predict(model, test.inputs[i]).first, test.labels[i]);
  }
}

TEST(Mlp, SaveLoadReproducesPredictionsBitExactly) {
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kFlight);
  BloomParams bloom{.m = 96, .k = 3, .n = 14, .f_p = 0.1, .hash_seed = 5};
  const TrainingSet set = NoiselessSet(tax, bloom, 400, 0, 13);

  MlpConfig cfg;
  cfg.input_size = 96;
  cfg.output_size = 11;
  cfg.epochs = 4;
  cfg.seed = 6;
  const MlpModel model = TrainMlp(set, cfg);

  std::stringstream buffer;
  model.Save(buffer);
  const MlpModel loaded = MlpModel::Load(buffer);

  for (int l = 0; l < 3; ++l) {
    ASSERT_TRUE(model.weights[l] == loaded.weights[l]);
    ASSERT_TRUE(model.biases[l] == loaded.biases[l]);
  }
  for (size_t i = 0; i < 20; ++i) {
    const auto [la, pa] = Predict(model, set.inputs[i]);
    const auto [lb, pb] = Predict(loaded, set.inputs[i]);
    EXPECT_EQ(la, lb);
    ASSERT_TRUE(pa == pb);  // bit-exact in float64
  }
}

TEST(Mlp, RejectsBadInputs) {
  MlpConfig cfg = SmallConfig(8, 3, 1);
  TrainingSet set;
  set.inputs.push_back(BitVector(8));
  set.labels.push_back(5);  // out of range
  EXPECT_THROW(TrainMlp(set, cfg), std::invalid_argument);

  set.labels[0] = 1;
  set.inputs[0] = BitVector(7);  // wrong width
  EXPECT_THROW(TrainMlp(set, cfg), std::invalid_argument);

  EXPECT_THROW(TrainMlp(TrainingSet{}, cfg), std::invalid_argument);

  cfg.dropout_rate = 1.0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(DecodeProfile, NoiselessRoundTrip) {
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  BloomParams bloom{.m = 144, .k = 3, .n = 27, .f_p = 0.1, .hash_seed = 5};

  std::vector<MlpModel> models;
  for (size_t j = 0; j < 3; ++j) {
    const TrainingSet set = NoiselessSet(tax, bloom, 1200, j, 20 + j);
    MlpConfig cfg;
    cfg.input_size = 144;
    cfg.output_size = tax.categories[j].classes.size();
    cfg.seed = j;
    models.push_back(TrainMlp(set, cfg));
  }

  const LabeledDataset ds = GenerateDataset(tax, 60, std::nullopt, 77);
  size_t exact = 0;
  for (const auto& p : ds.profiles) {
    std::vector<std::string> values;
    for (size_t j = 0; j < 3; ++j) values.push_back(tax.categories[j].classes[p.selections[j]]);
    const Profile decoded = DecodeProfile(models, BloomEncode(values, bloom));
    exact += decoded == p;
  }
  EXPECT_GE(exact, 58u);  // noiseless pipeline decodes nearly everything

  // Totality: the all-zeros report still decodes to some valid profile.
  const Profile fallback = DecodeProfile(models, BitVector(144));
  ASSERT_EQ(fallback.selections.size(), 3u);
  for (size_t j = 0; j < 3; ++j) {
    EXPECT_LT(fallback.selections[j], tax.categories[j].classes.size());
  }
}

}  // namespace
}  // namespace ldprec
