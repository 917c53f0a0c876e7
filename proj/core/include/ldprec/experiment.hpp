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

#ifndef LDPREC_EXPERIMENT_HPP_
#define LDPREC_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldprec/attacks.hpp"
#include "ldprec/bloom.hpp"
#include "ldprec/dataset.hpp"
#include "ldprec/kmeans.hpp"
#include "ldprec/mlp.hpp"
#include "ldprec/perturbation.hpp"

namespace ldprec {

// End-to-end experiment configuration.  Parsed from a JSON config file;
// every field has a desk-scale default.
struct ExperimentConfig {
  std::string taxonomy = "preference";

  struct {
    size_t train = 2000;
    size_t validation = 1000;
    size_t profiles = 8000;
    // 0 archetypes means independent per-category draws.
    size_t archetypes = 4;
    double mutation_rate = 0.1;
    std::optional<ClassWeights> class_weights;
  } dataset;

  struct {
    std::optional<size_t> m = 144;   // exactly one of m / f_p drives sizing
    std::optional<double> f_p;
    size_t k = 3;
    uint64_t hash_seed = 42;
  } bloom;

  struct {
    std::optional<double> f;         // explicit noise overrides epsilon
    double epsilon = 0.8;
    // f = 2 / (1 + exp(scale * epsilon)); 0 means 1/k, i.e. the swept
    // epsilon is the permanent budget epsilon1.
    double epsilon_scale = 0.0;
    double p = 0.5;
    double q = 0.75;
  } privacy;

  struct {
    size_t hidden1 = 60;
    size_t hidden2 = 50;
    double dropout = 0.2;
    size_t epochs = 25;
    size_t batch = 70;
    double learning_rate = 0.001;
  } decoder;

  struct {
    size_t K = 4;
    size_t k_range_lo = 1;
    size_t k_range_hi = 15;
    bool soft_features = false;
  } clustering;

  // Reports aggregated per client before decoding; 1 = single-report.
  size_t sessions = 1;

  struct {
    std::vector<double> epsilon = {0.1, 0.4, 0.8, 1.2, 2.0};
    std::vector<size_t> bloom_size = {48, 96, 144, 192};
    std::vector<size_t> hash_count = {3, 5, 7, 9};
  } sweep;

  // Category attacked by the advanced adversary in the trade-off runner.
  std::string tradeoff_category = "music";

  uint64_t seed = 1;
  std::string out_dir = ".";

  static ExperimentConfig FromJsonText(const std::string& text);
  static ExperimentConfig FromJsonFile(const std::string& path);
  std::string ToJsonText() const;

  // Stable 64-bit hash of the canonical JSON form, as hex.
  std::string Hash() const;

  // Multiplies the dataset sizes by 10 (the paper-scale runs).
  void ApplyFullScale();

  void Validate() const;

  // Resolved mechanism parameters.
  BloomParams ResolveBloom(const Taxonomy& taxonomy) const;
  PrivacyParams ResolvePrivacy(double epsilon_override) const;
  PrivacyParams ResolvePrivacy() const { return ResolvePrivacy(privacy.epsilon); }
  MlpConfig ResolveDecoder(size_t input_size, size_t output_size, uint64_t seed) const;
};

// One measured grid point.
struct GridRecord {
  std::string config_hash;  // hash of the config that produced this record
  std::string sweep_name;   // "pipeline", "epsilon", "bloom_size", "hash_count", "tradeoff"
  double grid_value = 0.0;
  double epsilon_nominal = 0.0;
  double f = 0.0;
  double p = 0.0;
  double q = 0.0;
  double epsilon1 = 0.0;    // true permanent budget of the resolved f
  double epsilon2 = 0.0;    // true per-report budget
  std::vector<double> decoder_accuracy;  // per category, validation split
  double decoder_mean_accuracy = 0.0;
  double clustering_utility = 0.0;
  double attack_success = -1.0;  // advanced adversary; -1 when not measured
};

struct ExperimentReport {
  std::string config_hash;
  uint64_t seed = 0;
  std::vector<GridRecord> records;

  bool has_intersection = false;
  double epsilon_star = 0.0;
  double value_at_star = 0.0;

  std::string ToJsonText() const;
  static ExperimentReport FromJsonText(const std::string& text);
  std::string CurvesCsv() const;
};

// Fully reproducible from (config, seed): dataset -> per-client perturbed
// reports -> per-category decoders -> decoded profiles -> clustering
// utility and decoder metrics.
ExperimentReport RunPipeline(const ExperimentConfig& config);

enum class SweepKind { kEpsilon, kBloomSize, kHashCount };

// One pipeline run per grid point; the profile dataset is shared across
// points and re-perturbed.
ExperimentReport RunSweep(const ExperimentConfig& config, SweepKind kind);

// Utility and privacy (1 - advanced-adversary success) curves over the
// epsilon grid, plus the interpolated intersection when the curves cross.
ExperimentReport RunTradeoff(const ExperimentConfig& config);

// Throws when required fields are missing or mistyped.
void ValidateReportJson(const std::string& json_text);

// Writes summary.json and the per-sweep CSV into config.out_dir.
void WriteReportFiles(const ExperimentReport& report, const ExperimentConfig& config,
                      const std::string& stem);

// Per-client recommender input: memoized PRR, then either one IRR report
// (sessions = 1) or the thresholded mean of `sessions` reports.
std::vector<BitVector> RecommenderInputs(const LabeledDataset& dataset,
                                         const BloomParams& bloom, const PrivacyParams& priv,
                                         size_t sessions, uint64_t seed);

// Clustering utility: kmeans on exact one-hot features vs kmeans on
// decoded-profile features, matched over cluster label permutations.
double ClusteringUtility(const LabeledDataset& dataset,
                         const std::vector<MlpModel>& category_models,
                         const BloomParams& bloom, const PrivacyParams& priv,
                         size_t sessions, size_t K, bool soft_features, uint64_t seed);

}  // namespace ldprec

#endif  // LDPREC_EXPERIMENT_HPP_
