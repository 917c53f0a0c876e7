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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "ldprec/hash.hpp"
#include "ldprec/rng.hpp"

#include "json.hpp"

namespace ldprec {

namespace {

using nlohmann::json;

class StageTimer {
 public:
  explicit StageTimer(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
    std::cerr << "[timing] stage=" << name_ << " ms=" << ms << '\n';
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
auto RunStage(const std::string& name, Fn&& fn) {
  StageTimer timer(name);
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + name + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJsonText(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  if (j.contains("taxonomy")) c.taxonomy = j.at("taxonomy").get<std::string>();
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    if (d.contains("train")) c.dataset.train = d.at("train").get<size_t>();
    if (d.contains("validation")) c.dataset.validation = d.at("validation").get<size_t>();
    if (d.contains("profiles")) c.dataset.profiles = d.at("profiles").get<size_t>();
    if (d.contains("archetypes")) c.dataset.archetypes = d.at("archetypes").get<size_t>();
    if (d.contains("mutation_rate")) {
      c.dataset.mutation_rate = d.at("mutation_rate").get<double>();
    }
    if (d.contains("class_weights") && !d.at("class_weights").is_null()) {
      c.dataset.class_weights = d.at("class_weights").get<ClassWeights>();
    }
  }
  if (j.contains("bloom")) {
    const auto& b = j.at("bloom");
    if (b.contains("m") && !b.at("m").is_null()) {
      c.bloom.m = b.at("m").get<size_t>();
    } else if (b.contains("m")) {
      c.bloom.m.reset();
    }
    if (b.contains("f_p") && !b.at("f_p").is_null()) {
      c.bloom.f_p = b.at("f_p").get<double>();
      if (!b.contains("m")) c.bloom.m.reset();
    }
    if (b.contains("k")) c.bloom.k = b.at("k").get<size_t>();
    if (b.contains("hash_seed")) c.bloom.hash_seed = b.at("hash_seed").get<uint64_t>();
  }
  if (j.contains("privacy")) {
    const auto& p = j.at("privacy");
    if (p.contains("f") && !p.at("f").is_null()) c.privacy.f = p.at("f").get<double>();
    if (p.contains("epsilon")) c.privacy.epsilon = p.at("epsilon").get<double>();
    if (p.contains("epsilon_scale")) {
      c.privacy.epsilon_scale = p.at("epsilon_scale").get<double>();
    }
    if (p.contains("p")) c.privacy.p = p.at("p").get<double>();
    if (p.contains("q")) c.privacy.q = p.at("q").get<double>();
  }
  if (j.contains("decoder")) {
    const auto& d = j.at("decoder");
    if (d.contains("hidden1")) c.decoder.hidden1 = d.at("hidden1").get<size_t>();
    if (d.contains("hidden2")) c.decoder.hidden2 = d.at("hidden2").get<size_t>();
    if (d.contains("dropout")) c.decoder.dropout = d.at("dropout").get<double>();
    if (d.contains("epochs")) c.decoder.epochs = d.at("epochs").get<size_t>();
    if (d.contains("batch")) c.decoder.batch = d.at("batch").get<size_t>();
    if (d.contains("learning_rate")) {
      c.decoder.learning_rate = d.at("learning_rate").get<double>();
    }
  }
  if (j.contains("clustering")) {
    const auto& k = j.at("clustering");
    if (k.contains("K")) c.clustering.K = k.at("K").get<size_t>();
    if (k.contains("k_range")) {
      c.clustering.k_range_lo = k.at("k_range").at(0).get<size_t>();
      c.clustering.k_range_hi = k.at("k_range").at(1).get<size_t>();
    }
    if (k.contains("soft_features")) {
      c.clustering.soft_features = k.at("soft_features").get<bool>();
    }
  }
  if (j.contains("sessions")) c.sessions = j.at("sessions").get<size_t>();
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (s.contains("epsilon")) c.sweep.epsilon = s.at("epsilon").get<std::vector<double>>();
    if (s.contains("bloom_size")) {
      c.sweep.bloom_size = s.at("bloom_size").get<std::vector<size_t>>();
    }
    if (s.contains("hash_count")) {
      c.sweep.hash_count = s.at("hash_count").get<std::vector<size_t>>();
    }
  }
  if (j.contains("tradeoff_category")) {
    c.tradeoff_category = j.at("tradeoff_category").get<std::string>();
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::FromJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJsonText(ss.str());
}

std::string ExperimentConfig::ToJsonText() const {
  json j;
  j["taxonomy"] = taxonomy;
  j["dataset"]["train"] = dataset.train;
  j["dataset"]["validation"] = dataset.validation;
  j["dataset"]["profiles"] = dataset.profiles;
  j["dataset"]["archetypes"] = dataset.archetypes;
  j["dataset"]["mutation_rate"] = dataset.mutation_rate;
  if (dataset.class_weights) {
    j["dataset"]["class_weights"] = *dataset.class_weights;
  } else {
    j["dataset"]["class_weights"] = nullptr;
  }
  if (bloom.m) {
    j["bloom"]["m"] = *bloom.m;
  } else {
    j["bloom"]["m"] = nullptr;
  }
  if (bloom.f_p) {
    j["bloom"]["f_p"] = *bloom.f_p;
  } else {
    j["bloom"]["f_p"] = nullptr;
  }
  j["bloom"]["k"] = bloom.k;
  j["bloom"]["hash_seed"] = bloom.hash_seed;
  if (privacy.f) {
    j["privacy"]["f"] = *privacy.f;
  } else {
    j["privacy"]["f"] = nullptr;
  }
  j["privacy"]["epsilon"] = privacy.epsilon;
  j["privacy"]["epsilon_scale"] = privacy.epsilon_scale;
  j["privacy"]["p"] = privacy.p;
  j["privacy"]["q"] = privacy.q;
  j["decoder"]["hidden1"] = decoder.hidden1;
  j["decoder"]["hidden2"] = decoder.hidden2;
  j["decoder"]["dropout"] = decoder.dropout;
  j["decoder"]["epochs"] = decoder.epochs;
  j["decoder"]["batch"] = decoder.batch;
  j["decoder"]["learning_rate"] = decoder.learning_rate;
  j["clustering"]["K"] = clustering.K;
  j["clustering"]["k_range"] = {clustering.k_range_lo, clustering.k_range_hi};
  j["clustering"]["soft_features"] = clustering.soft_features;
  j["sessions"] = sessions;
  j["sweep"]["epsilon"] = sweep.epsilon;
  j["sweep"]["bloom_size"] = sweep.bloom_size;
  j["sweep"]["hash_count"] = sweep.hash_count;
  j["tradeoff_category"] = tradeoff_category;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  return j.dump(2);
}

std::string ExperimentConfig::Hash() const {
  // json::dump orders keys, so this is a canonical form.
  const uint64_t h = SeededHash64(json::parse(ToJsonText()).dump(), 0x636f6e66 /* "conf" */);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentConfig::ApplyFullScale() {
  dataset.train *= 10;
  dataset.validation *= 10;
  dataset.profiles *= 10;
}

void ExperimentConfig::Validate() const {
  if (dataset.train == 0 || dataset.validation == 0 || dataset.profiles == 0) {
    throw std::invalid_argument("ExperimentConfig: dataset sizes must be >= 1");
  }
  if (bloom.m.has_value() == bloom.f_p.has_value()) {
    throw std::invalid_argument("ExperimentConfig: exactly one of bloom.m / bloom.f_p");
  }
  if (bloom.k == 0) throw std::invalid_argument("ExperimentConfig: bloom.k >= 1");
  if (!(dataset.mutation_rate >= 0.0 && dataset.mutation_rate <= 1.0)) {
    throw std::invalid_argument("ExperimentConfig: mutation_rate in [0,1]");
  }
  if (sessions == 0) throw std::invalid_argument("ExperimentConfig: sessions >= 1");
}

BloomParams ExperimentConfig::ResolveBloom(const Taxonomy& tax) const {
  BloomParams params;
  params.n = tax.TotalClassCount();
  params.f_p = bloom.f_p.value_or(0.1);
  params.m = bloom.m ? *bloom.m : OptimalM(params.n, *bloom.f_p);
  params.k = bloom.k;
  params.hash_seed = bloom.hash_seed;
  params.Validate();
  return params;
}

PrivacyParams ExperimentConfig::ResolvePrivacy(double epsilon_override) const {
  PrivacyParams priv;
  priv.k = bloom.k;
  priv.p = privacy.p;
  priv.q = privacy.q;
  if (privacy.f) {
    priv.f = *privacy.f;
  } else {
    const double scale = privacy.epsilon_scale > 0.0
                             ? privacy.epsilon_scale
                             : 1.0 / static_cast<double>(bloom.k);
    priv.f = 2.0 / (1.0 + std::exp(scale * epsilon_override));
  }
  priv.Validate(/*allow_degenerate=*/true);
  return priv;
}

MlpConfig ExperimentConfig::ResolveDecoder(size_t input_size, size_t output_size,
                                           uint64_t model_seed) const {
  MlpConfig cfg;
  cfg.input_size = input_size;
  cfg.hidden1_size = decoder.hidden1;
  cfg.hidden2_size = decoder.hidden2;
  cfg.output_size = output_size;
  cfg.dropout_rate = decoder.dropout;
  cfg.epochs = decoder.epochs;
  cfg.batch_size = decoder.batch;
  cfg.learning_rate = decoder.learning_rate;
  cfg.seed = model_seed;
  return cfg;
}

std::vector<BitVector> RecommenderInputs(const LabeledDataset& dataset,
                                         const BloomParams& bloom, const PrivacyParams& priv,
                                         size_t sessions, uint64_t seed) {
  if (sessions == 0) throw std::invalid_argument("RecommenderInputs: sessions >= 1");
  std::vector<BitVector> inputs;
  inputs.reserve(dataset.profiles.size());
  RngFactory factory(seed);
  for (size_t i = 0; i < dataset.profiles.size(); ++i) {
    Rng rng = factory.Stream({0x7269 /* "ri" */, i});
    const BitVector b =
        BloomEncode(ProfileValues(dataset.taxonomy, dataset.profiles[i]), bloom);
    const BitVector b_prime = Prr(b, priv.f, rng);
    if (sessions == 1) {
      inputs.push_back(Irr(b_prime, priv.p, priv.q, rng));
    } else {
      inputs.push_back(ThresholdMeans(SessionMeans(b_prime, priv, sessions, rng), priv));
    }
  }
  return inputs;
}

namespace {

LabeledDataset MakeSplit(const ExperimentConfig& config, const Taxonomy& taxonomy,
                         size_t count, uint64_t split_id) {
  const uint64_t seed = RngFactory(config.seed).Stream({0x64617461 /* "data" */, split_id})
                            .NextU64();
  if (config.dataset.archetypes > 0) {
    return GenerateArchetypeDataset(taxonomy, count,
                                    DefaultArchetypes(taxonomy, config.dataset.archetypes),
                                    config.dataset.mutation_rate, seed);
  }
  return GenerateDataset(taxonomy, count, config.dataset.class_weights, seed);
}

std::vector<MlpModel> TrainCategoryModels(const ExperimentConfig& config,
                                          const Taxonomy& taxonomy,
                                          const LabeledDataset& train,
                                          const std::vector<BitVector>& train_inputs,
                                          const BloomParams& bloom) {
  std::vector<MlpModel> models;
  models.reserve(taxonomy.categories.size());
  for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
    TrainingSet set;
    set.inputs = train_inputs;
    set.labels.reserve(train.profiles.size());
    for (const auto& p : train.profiles) set.labels.push_back(p.selections[j]);
    const uint64_t model_seed =
        RngFactory(config.seed).Stream({0x6d6f64 /* "mod" */, j}).NextU64();
    models.push_back(TrainMlp(
        set, config.ResolveDecoder(bloom.m, taxonomy.categories[j].classes.size(), model_seed)));
  }
  return models;
}

std::vector<double> DecoderAccuracies(const Taxonomy& taxonomy,
                                      const std::vector<MlpModel>& models,
                                      const LabeledDataset& validation,
                                      const std::vector<BitVector>& val_inputs) {
  const Eigen::MatrixXd x = ToMatrix(val_inputs);
  std::vector<double> acc;
  acc.reserve(models.size());
  for (size_t j = 0; j < models.size(); ++j) {
    const std::vector<size_t> pred = PredictLabels(models[j], x);
    size_t correct = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
      correct += pred[i] == validation.profiles[i].selections[j];
    }
    acc.push_back(static_cast<double>(correct) / static_cast<double>(pred.size()));
  }
  return acc;
}

GridRecord MeasurePoint(const ExperimentConfig& config, const Taxonomy& taxonomy,
                        const LabeledDataset& train, const LabeledDataset& validation,
                        const LabeledDataset& profiles, const BloomParams& bloom,
                        const PrivacyParams& priv, double nominal_epsilon,
                        uint64_t point_id) {
  const uint64_t point_seed =
      RngFactory(config.seed).Stream({0x7074 /* "pt" */, point_id}).NextU64();
  RngFactory factory(point_seed);

  const auto train_inputs = RunStage("perturb-train", [&] {
    return RecommenderInputs(train, bloom, priv, config.sessions, factory.Stream(1).NextU64());
  });
  const auto models = RunStage("train-decoders", [&] {
    return TrainCategoryModels(config, taxonomy, train, train_inputs, bloom);
  });
  const auto val_inputs = RunStage("perturb-validation", [&] {
    return RecommenderInputs(validation, bloom, priv, config.sessions,
                             factory.Stream(2).NextU64());
  });

  GridRecord rec;
  rec.epsilon_nominal = nominal_epsilon;
  rec.f = priv.f;
  rec.p = priv.p;
  rec.q = priv.q;
  rec.epsilon1 = Epsilon1OfF(priv.f, priv.k);
  rec.epsilon2 = Epsilon2Of(priv.f, priv.p, priv.q, priv.k);
  rec.decoder_accuracy = RunStage("evaluate-decoders", [&] {
    return DecoderAccuracies(taxonomy, models, validation, val_inputs);
  });
  double sum = 0.0;
  for (double a : rec.decoder_accuracy) sum += a;
  rec.decoder_mean_accuracy = sum / static_cast<double>(rec.decoder_accuracy.size());
  rec.clustering_utility = RunStage("clustering-utility", [&] {
    return ClusteringUtility(profiles, models, bloom, priv, config.sessions,
                             config.clustering.K, config.clustering.soft_features,
                             factory.Stream(3).NextU64());
  });
  return rec;
}

}  // namespace

double ClusteringUtility(const LabeledDataset& dataset,
                         const std::vector<MlpModel>& category_models,
                         const BloomParams& bloom, const PrivacyParams& priv,
                         size_t sessions, size_t K, bool soft_features, uint64_t seed) {
  RngFactory factory(seed);
  const std::vector<BitVector> inputs =
      RecommenderInputs(dataset, bloom, priv, sessions, factory.Stream(1).NextU64());
  const Eigen::MatrixXd x = ToMatrix(inputs);

  const Eigen::MatrixXd exact = OneHotFeatures(dataset.profiles, dataset.taxonomy);
  Eigen::MatrixXd decoded(exact.rows(), exact.cols());
  if (soft_features) {
    Eigen::Index offset = 0;
    for (const auto& model : category_models) {
      const Eigen::MatrixXd probs = PredictProba(model, x);
      decoded.block(0, offset, probs.rows(), probs.cols()) = probs;
      offset += probs.cols();
    }
  } else {
    std::vector<Profile> decoded_profiles(dataset.profiles.size());
    std::vector<std::vector<size_t>> labels(category_models.size());
    for (size_t j = 0; j < category_models.size(); ++j) {
      labels[j] = PredictLabels(category_models[j], x);
    }
    for (size_t i = 0; i < dataset.profiles.size(); ++i) {
      decoded_profiles[i].selections.resize(category_models.size());
      for (size_t j = 0; j < category_models.size(); ++j) {
        decoded_profiles[i].selections[j] = labels[j][i];
      }
    }
    decoded = OneHotFeatures(decoded_profiles, dataset.taxonomy);
  }

  const uint64_t km_seed = factory.Stream(2).NextU64();
  const ClusteringResult reference = KMeansCluster(exact, K, km_seed, 100, 1e-6, 4);
  const ClusteringResult perturbed = KMeansCluster(decoded, K, km_seed, 100, 1e-6, 4);
  return MatchedAccuracy(reference.assignments, perturbed.assignments, K);
}

ExperimentReport RunPipeline(const ExperimentConfig& config) {
  config.Validate();
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  const BloomParams bloom = config.ResolveBloom(taxonomy);
  const PrivacyParams priv = config.ResolvePrivacy();

  const LabeledDataset train = RunStage("generate-train", [&] {
    return MakeSplit(config, taxonomy, config.dataset.train, 1);
  });
  const LabeledDataset validation = RunStage("generate-validation", [&] {
    return MakeSplit(config, taxonomy, config.dataset.validation, 2);
  });
  const LabeledDataset profiles = RunStage("generate-profiles", [&] {
    return MakeSplit(config, taxonomy, config.dataset.profiles, 3);
  });

  ExperimentReport report;
  report.config_hash = config.Hash();
  report.seed = config.seed;
  GridRecord rec = MeasurePoint(config, taxonomy, train, validation, profiles, bloom, priv,
                                config.privacy.epsilon, 0);
  rec.config_hash = report.config_hash;
  rec.sweep_name = "pipeline";
  rec.grid_value = config.privacy.epsilon;
  report.records.push_back(std::move(rec));
  return report;
}

ExperimentReport RunSweep(const ExperimentConfig& config, SweepKind kind) {
  config.Validate();
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);

  const LabeledDataset train = MakeSplit(config, taxonomy, config.dataset.train, 1);
  const LabeledDataset validation = MakeSplit(config, taxonomy, config.dataset.validation, 2);
  const LabeledDataset profiles = MakeSplit(config, taxonomy, config.dataset.profiles, 3);

  ExperimentReport report;
  report.config_hash = config.Hash();
  report.seed = config.seed;

  std::vector<double> grid;
  std::string sweep_name;
  switch (kind) {
    case SweepKind::kEpsilon:
      sweep_name = "epsilon";
      grid = config.sweep.epsilon;
      break;
    case SweepKind::kBloomSize:
      sweep_name = "bloom_size";
      for (size_t m : config.sweep.bloom_size) grid.push_back(static_cast<double>(m));
      break;
    case SweepKind::kHashCount:
      sweep_name = "hash_count";
      for (size_t k : config.sweep.hash_count) grid.push_back(static_cast<double>(k));
      break;
  }
  if (grid.empty()) throw std::invalid_argument("RunSweep: empty grid");

  for (size_t g = 0; g < grid.size(); ++g) {
    ExperimentConfig point_config = config;
    double nominal_epsilon = config.privacy.epsilon;
    switch (kind) {
      case SweepKind::kEpsilon:
        point_config.privacy.epsilon = grid[g];
        nominal_epsilon = grid[g];
        break;
      case SweepKind::kBloomSize:
        point_config.bloom.m = static_cast<size_t>(grid[g]);
        point_config.bloom.f_p.reset();
        break;
      case SweepKind::kHashCount:
        point_config.bloom.k = static_cast<size_t>(grid[g]);
        break;
    }
    const BloomParams bloom = point_config.ResolveBloom(taxonomy);
    const PrivacyParams priv = point_config.ResolvePrivacy(nominal_epsilon);
    GridRecord rec = MeasurePoint(point_config, taxonomy, train, validation, profiles, bloom,
                                  priv, nominal_epsilon, g + 1);
    rec.config_hash = report.config_hash;
    rec.sweep_name = sweep_name;
    rec.grid_value = grid[g];
    report.records.push_back(std::move(rec));
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const GridRecord& a, const GridRecord& b) { return a.grid_value < b.grid_value; });
  return report;
}

ExperimentReport RunTradeoff(const ExperimentConfig& config) {
  config.Validate();
  if (config.sweep.epsilon.empty()) throw std::invalid_argument("RunTradeoff: empty grid");
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  const BloomParams bloom = config.ResolveBloom(taxonomy);

  size_t category_index = taxonomy.categories.size();
  for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
    if (taxonomy.categories[j].name == config.tradeoff_category) category_index = j;
  }
  if (category_index == taxonomy.categories.size()) {
    throw std::invalid_argument("RunTradeoff: unknown tradeoff_category " +
                                config.tradeoff_category);
  }

  const LabeledDataset train = MakeSplit(config, taxonomy, config.dataset.train, 1);
  const LabeledDataset validation = MakeSplit(config, taxonomy, config.dataset.validation, 2);
  const LabeledDataset profiles = MakeSplit(config, taxonomy, config.dataset.profiles, 3);

  ExperimentReport report;
  report.config_hash = config.Hash();
  report.seed = config.seed;

  std::vector<double> grid = config.sweep.epsilon;
  std::sort(grid.begin(), grid.end());
  for (size_t g = 0; g < grid.size(); ++g) {
    const PrivacyParams priv = config.ResolvePrivacy(grid[g]);
    GridRecord rec = MeasurePoint(config, taxonomy, train, validation, profiles, bloom, priv,
                                  grid[g], g + 1);
    rec.config_hash = report.config_hash;
    rec.sweep_name = "tradeoff";
    rec.grid_value = grid[g];
    const uint64_t game_seed =
        RngFactory(config.seed).Stream({0x6161 /* "aa" */, g}).NextU64();
    const AdvancedGameResult game = RunStage("advanced-adversary", [&] {
      return RunAdvancedGame(train, validation, category_index, priv, bloom,
                             config.ResolveDecoder(bloom.m, 1, 0), game_seed);
    });
    rec.attack_success = game.attack.success_rate;
    report.records.push_back(std::move(rec));
  }

  // Interpolated crossing of utility and privacy = 1 - attack success.
  for (size_t i = 0; i + 1 < report.records.size(); ++i) {
    const auto& a = report.records[i];
    const auto& b = report.records[i + 1];
    const double da = a.clustering_utility - (1.0 - a.attack_success);
    const double db = b.clustering_utility - (1.0 - b.attack_success);
    if (da == 0.0) {
      report.has_intersection = true;
      report.epsilon_star = a.grid_value;
      report.value_at_star = a.clustering_utility;
      break;
    }
    if (da < 0.0 && db >= 0.0) {
      const double t = da / (da - db);
      report.has_intersection = true;
      report.epsilon_star = a.grid_value + t * (b.grid_value - a.grid_value);
      report.value_at_star =
          a.clustering_utility + t * (b.clustering_utility - a.clustering_utility);
      break;
    }
  }
  return report;
}

std::string ExperimentReport::ToJsonText() const {
  json j;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["records"] = json::array();
  for (const auto& r : records) {
    json rec;
    rec["config_hash"] = r.config_hash;
    rec["sweep_name"] = r.sweep_name;
    rec["grid_value"] = r.grid_value;
    rec["epsilon_nominal"] = r.epsilon_nominal;
    rec["f"] = r.f;
    rec["p"] = r.p;
    rec["q"] = r.q;
    rec["epsilon1"] = std::isfinite(r.epsilon1) ? json(r.epsilon1) : json("inf");
    rec["epsilon2"] = std::isfinite(r.epsilon2) ? json(r.epsilon2) : json("inf");
    rec["decoder_accuracy"] = r.decoder_accuracy;
    rec["decoder_mean_accuracy"] = r.decoder_mean_accuracy;
    rec["clustering_utility"] = r.clustering_utility;
    rec["attack_success"] = r.attack_success;
    j["records"].push_back(std::move(rec));
  }
  j["has_intersection"] = has_intersection;
  if (has_intersection) {
    j["epsilon_star"] = epsilon_star;
    j["value_at_star"] = value_at_star;
  }
  return j.dump(2);
}

ExperimentReport ExperimentReport::FromJsonText(const std::string& text) {
  ValidateReportJson(text);
  const json j = json::parse(text);
  ExperimentReport r;
  r.config_hash = j.at("config_hash").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  for (const auto& rec : j.at("records")) {
    GridRecord g;
    g.config_hash = rec.at("config_hash").get<std::string>();
    g.sweep_name = rec.at("sweep_name").get<std::string>();
    g.grid_value = rec.at("grid_value").get<double>();
    g.epsilon_nominal = rec.at("epsilon_nominal").get<double>();
    g.f = rec.at("f").get<double>();
    g.p = rec.at("p").get<double>();
    g.q = rec.at("q").get<double>();
    g.epsilon1 = rec.at("epsilon1").is_string() ? INFINITY : rec.at("epsilon1").get<double>();
    g.epsilon2 = rec.at("epsilon2").is_string() ? INFINITY : rec.at("epsilon2").get<double>();
    g.decoder_accuracy = rec.at("decoder_accuracy").get<std::vector<double>>();
    g.decoder_mean_accuracy = rec.at("decoder_mean_accuracy").get<double>();
    g.clustering_utility = rec.at("clustering_utility").get<double>();
    g.attack_success = rec.at("attack_success").get<double>();
    r.records.push_back(std::move(g));
  }
  r.has_intersection = j.at("has_intersection").get<bool>();
  if (r.has_intersection) {
    r.epsilon_star = j.at("epsilon_star").get<double>();
    r.value_at_star = j.at("value_at_star").get<double>();
  }
  return r;
}

void ValidateReportJson(const std::string& json_text) {
  const json j = json::parse(json_text);
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("report schema: " + what);
  };
  require(j.contains("config_hash") && j.at("config_hash").is_string(),
          "config_hash must be a string");
  require(j.contains("seed") && j.at("seed").is_number_unsigned(),
          "seed must be an unsigned integer");
  require(j.contains("records") && j.at("records").is_array(), "records must be an array");
  for (const auto& rec : j.at("records")) {
    require(rec.contains("config_hash") && rec.at("config_hash").is_string(),
            "record.config_hash must be a string");
    require(rec.contains("sweep_name") && rec.at("sweep_name").is_string(),
            "record.sweep_name must be a string");
    for (const char* field : {"grid_value", "epsilon_nominal", "f", "p", "q",
                              "decoder_mean_accuracy", "clustering_utility",
                              "attack_success"}) {
      require(rec.contains(field) && rec.at(field).is_number(),
              std::string("record.") + field + " must be a number");
    }
    for (const char* field : {"epsilon1", "epsilon2"}) {
      require(rec.contains(field) &&
                  (rec.at(field).is_number() || rec.at(field).is_string()),
              std::string("record.") + field + " must be a number or \"inf\"");
    }
    require(rec.contains("decoder_accuracy") && rec.at("decoder_accuracy").is_array(),
            "record.decoder_accuracy must be an array");
    for (const auto& a : rec.at("decoder_accuracy")) {
      require(a.is_number(), "record.decoder_accuracy entries must be numbers");
    }
  }
  require(j.contains("has_intersection") && j.at("has_intersection").is_boolean(),
          "has_intersection must be a boolean");
  if (j.at("has_intersection").get<bool>()) {
    require(j.contains("epsilon_star") && j.at("epsilon_star").is_number(),
            "epsilon_star must be a number");
    require(j.contains("value_at_star") && j.at("value_at_star").is_number(),
            "value_at_star must be a number");
  }
}

std::string ExperimentReport::CurvesCsv() const {
  std::ostringstream out;
  out << "sweep,grid_value,epsilon_nominal,f,epsilon1,epsilon2,decoder_mean_accuracy,"
         "clustering_utility,attack_success,privacy,config_hash\n";
  for (const auto& r : records) {
    out << r.sweep_name << ',' << r.grid_value << ',' << r.epsilon_nominal << ',' << r.f << ','
        << r.epsilon1 << ',' << r.epsilon2 << ',' << r.decoder_mean_accuracy << ','
        << r.clustering_utility << ',' << r.attack_success << ','
        << (r.attack_success >= 0.0 ? 1.0 - r.attack_success : -1.0) << ','
        << r.config_hash << '\n';
  }
  return out.str();
}

void WriteReportFiles(const ExperimentReport& report, const ExperimentConfig& config,
                      const std::string& stem) {
  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (stem + "-summary.json"));
    out << report.ToJsonText() << '\n';
  }
  {
    std::ofstream out(dir / (stem + "-curves.csv"));
    out << report.CurvesCsv();
  }
  {
    std::ofstream out(dir / (stem + "-config.json"));
    out << config.ToJsonText() << '\n';
  }
}

}  // namespace ldprec
