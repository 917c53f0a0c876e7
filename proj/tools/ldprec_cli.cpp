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

// Command-line front end for the perturbed-recommendation experiment suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ldprec/attacks.hpp"
#include "ldprec/bloom.hpp"
#include "ldprec/dataset.hpp"
#include "ldprec/experiment.hpp"
#include "ldprec/kmeans.hpp"
#include "ldprec/mlp.hpp"
#include "ldprec/perturbation.hpp"
#include "ldprec/rng.hpp"

namespace {

using namespace ldprec;

struct GlobalOpts {
  std::string config_path;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  bool full_scale = false;
};

ExperimentConfig LoadConfig(const GlobalOpts& opts) {
  ExperimentConfig config;
  if (!opts.config_path.empty()) config = ExperimentConfig::FromJsonFile(opts.config_path);
  if (opts.seed_set) config.seed = opts.seed;
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  if (opts.full_scale) config.ApplyFullScale();
  config.Validate();
  return config;
}

std::vector<std::string> SplitValues(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int CmdGenerate(const GlobalOpts& opts) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  LabeledDataset ds;
  if (config.dataset.archetypes > 0) {
    ds = GenerateArchetypeDataset(taxonomy, config.dataset.profiles,
                                  DefaultArchetypes(taxonomy, config.dataset.archetypes),
                                  config.dataset.mutation_rate, config.seed);
  } else {
    ds = GenerateDataset(taxonomy, config.dataset.profiles, config.dataset.class_weights,
                         config.seed);
  }
  const auto path = std::filesystem::path(config.out_dir) / "dataset.csv";
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  WriteDatasetCsv(ds, out);
  std::cout << "wrote " << ds.profiles.size() << " profiles to " << path.string() << '\n';
  return 0;
}

int CmdEncode(const GlobalOpts& opts, const std::string& values_csv) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  const BloomParams bloom = config.ResolveBloom(taxonomy);
  const BitVector bv = BloomEncode(SplitValues(values_csv), bloom);
  std::cout << bv.ToHex() << '\n';
  return 0;
}

int CmdPerturb(const GlobalOpts& opts, const std::string& values_csv,
               const std::string& client_id, size_t sessions) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  const BloomParams bloom = config.ResolveBloom(taxonomy);
  const PrivacyParams priv = config.ResolvePrivacy();
  const BudgetReport budgets = ComputeBudgets(priv);

  ClientState state(config.seed);
  const auto values = SplitValues(values_csv);
  for (size_t s = 0; s < sessions; ++s) {
    ReportRecord rec;
    rec.client_id = client_id;
    rec.bits = PerturbReport(state, client_id, values, bloom, priv, s);
    rec.m = bloom.m;
    rec.k = bloom.k;
    rec.f = priv.f;
    rec.p = priv.p;
    rec.q = priv.q;
    rec.epsilon1 = budgets.epsilon1;
    rec.epsilon2 = budgets.epsilon2;
    rec.session_counter = s;
    std::cout << rec.ToJsonLine() << '\n';
  }
  return 0;
}

int CmdTrain(const GlobalOpts& opts) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  const BloomParams bloom = config.ResolveBloom(taxonomy);
  const PrivacyParams priv = config.ResolvePrivacy();

  RngFactory factory(config.seed);
  LabeledDataset train, validation;
  if (config.dataset.archetypes > 0) {
    const auto arch = DefaultArchetypes(taxonomy, config.dataset.archetypes);
    train = GenerateArchetypeDataset(taxonomy, config.dataset.train, arch,
                                     config.dataset.mutation_rate, factory.Stream(1).NextU64());
    validation =
        GenerateArchetypeDataset(taxonomy, config.dataset.validation, arch,
                                 config.dataset.mutation_rate, factory.Stream(2).NextU64());
  } else {
    train = GenerateDataset(taxonomy, config.dataset.train, config.dataset.class_weights,
                            factory.Stream(1).NextU64());
    validation = GenerateDataset(taxonomy, config.dataset.validation,
                                 config.dataset.class_weights, factory.Stream(2).NextU64());
  }

  const auto train_inputs =
      RecommenderInputs(train, bloom, priv, config.sessions, factory.Stream(3).NextU64());
  const auto val_inputs =
      RecommenderInputs(validation, bloom, priv, config.sessions, factory.Stream(4).NextU64());

  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
    TrainingSet set;
    set.inputs = train_inputs;
    for (const auto& p : train.profiles) set.labels.push_back(p.selections[j]);
    const MlpModel model = TrainMlp(
        set, config.ResolveDecoder(bloom.m, taxonomy.categories[j].classes.size(),
                                   factory.Stream({5, j}).NextU64()));

    TrainingSet val;
    val.inputs = val_inputs;
    for (const auto& p : validation.profiles) val.labels.push_back(p.selections[j]);
    const ClassificationReport report = Evaluate(model, val);

    const std::string name = taxonomy.categories[j].name;
    std::ofstream model_out(dir / ("model-" + name + ".txt"));
    model.Save(model_out);
    WriteFile(dir / ("metrics-" + name + ".csv"),
              report.ToCsv(taxonomy.categories[j].classes));
    std::cout << name << " accuracy " << report.accuracy << '\n';
  }
  return 0;
}

int CmdCluster(const GlobalOpts& opts) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  LabeledDataset ds;
  if (config.dataset.archetypes > 0) {
    ds = GenerateArchetypeDataset(taxonomy, config.dataset.profiles,
                                  DefaultArchetypes(taxonomy, config.dataset.archetypes),
                                  config.dataset.mutation_rate, config.seed);
  } else {
    ds = GenerateDataset(taxonomy, config.dataset.profiles, config.dataset.class_weights,
                         config.seed);
  }
  const Eigen::MatrixXd features = OneHotFeatures(ds.profiles, taxonomy);

  const auto scan = ElbowScan(features, config.clustering.k_range_lo,
                              config.clustering.k_range_hi, config.seed);
  std::ostringstream elbow;
  elbow << "k,wcss\n";
  for (const auto& [k, wcss] : scan) elbow << k << ',' << wcss << '\n';
  WriteFile(std::filesystem::path(config.out_dir) / "elbow.csv", elbow.str());

  const ClusteringResult result = KMeansCluster(features, config.clustering.K, config.seed);
  WriteFile(std::filesystem::path(config.out_dir) / "clusters.csv", result.ToCsv());
  std::cout << "K=" << result.K << " wcss=" << result.wcss
            << " iterations=" << result.iterations << '\n';
  return 0;
}

int CmdAttackBasic(const GlobalOpts& opts, size_t trials) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);

  AttackSetup setup;
  for (const auto& cat : taxonomy.categories) {
    for (const auto& cls : cat.classes) setup.universe.push_back(cls);
  }

  std::ostringstream csv;
  csv << "epsilon,k,trials,successes,success_rate\n";
  for (size_t k : config.sweep.hash_count) {
    for (double eps : config.sweep.epsilon) {
      ExperimentConfig point = config;
      point.bloom.k = k;
      setup.bloom = point.ResolveBloom(taxonomy);
      setup.priv = point.ResolvePrivacy(eps);
      const AttackResult res = RunBasicGame(setup, trials, config.seed);
      csv << eps << ',' << k << ',' << res.trials << ',' << res.successes << ','
          << res.success_rate << '\n';
    }
  }
  WriteFile(std::filesystem::path(config.out_dir) / "attack-basic.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

int CmdAttackAdvanced(const GlobalOpts& opts) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  const BloomParams bloom = config.ResolveBloom(taxonomy);
  const PrivacyParams priv = config.ResolvePrivacy();

  size_t category_index = 0;
  for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
    if (taxonomy.categories[j].name == config.tradeoff_category) category_index = j;
  }

  RngFactory factory(config.seed);
  LabeledDataset train, test;
  if (config.dataset.archetypes > 0) {
    const auto arch = DefaultArchetypes(taxonomy, config.dataset.archetypes);
    train = GenerateArchetypeDataset(taxonomy, config.dataset.train, arch,
                                     config.dataset.mutation_rate, factory.Stream(1).NextU64());
    test = GenerateArchetypeDataset(taxonomy, config.dataset.validation, arch,
                                    config.dataset.mutation_rate, factory.Stream(2).NextU64());
  } else {
    train = GenerateDataset(taxonomy, config.dataset.train, config.dataset.class_weights,
                            factory.Stream(1).NextU64());
    test = GenerateDataset(taxonomy, config.dataset.validation, config.dataset.class_weights,
                           factory.Stream(2).NextU64());
  }

  const AdvancedGameResult result =
      RunAdvancedGame(train, test, category_index, priv, bloom,
                      config.ResolveDecoder(bloom.m, 1, 0), factory.Stream(3).NextU64());
  const auto& classes = taxonomy.categories[category_index].classes;
  WriteFile(std::filesystem::path(config.out_dir) / "attack-advanced-report.csv",
            result.report.ToCsv(classes));
  WriteFile(std::filesystem::path(config.out_dir) / "attack-advanced-confusion.csv",
            result.report.ConfusionCsv());
  std::cout << "category=" << taxonomy.categories[category_index].name
            << " success_rate=" << result.attack.success_rate << '\n';
  return 0;
}

int CmdAttackAveraging(const GlobalOpts& opts, const std::string& values_csv,
                       size_t observations) {
  const ExperimentConfig config = LoadConfig(opts);
  const Taxonomy taxonomy = MakeBuiltinTaxonomy(config.taxonomy);
  const BloomParams bloom = config.ResolveBloom(taxonomy);
  const PrivacyParams priv = config.ResolvePrivacy();

  std::vector<std::string> values = SplitValues(values_csv);
  if (values.empty()) {
    // Default target: the first class of every category.
    for (const auto& cat : taxonomy.categories) values.push_back(cat.classes[0]);
  }
  const AveragingGameResult res =
      RunAveragingGame(values, priv, bloom, observations, config.seed);
  std::cout << "observations=" << observations
            << " recovered_b_prime=" << (res.recovered_b_prime ? "true" : "false")
            << " hamming_to_b_prime=" << res.hamming_to_b_prime
            << " hamming_to_b=" << res.hamming_to_b << '\n';
  return 0;
}

int CmdPipeline(const GlobalOpts& opts) {
  const ExperimentConfig config = LoadConfig(opts);
  const ExperimentReport report = RunPipeline(config);
  WriteReportFiles(report, config, "pipeline");
  const auto& r = report.records.front();
  std::cout << "utility=" << r.clustering_utility
            << " decoder_mean_accuracy=" << r.decoder_mean_accuracy << " f=" << r.f
            << " epsilon1=" << r.epsilon1 << " epsilon2=" << r.epsilon2 << '\n';
  return 0;
}

int CmdSweep(const GlobalOpts& opts, const std::string& kind) {
  const ExperimentConfig config = LoadConfig(opts);
  SweepKind sweep_kind;
  if (kind == "epsilon") {
    sweep_kind = SweepKind::kEpsilon;
  } else if (kind == "bloom_size") {
    sweep_kind = SweepKind::kBloomSize;
  } else if (kind == "hash_count") {
    sweep_kind = SweepKind::kHashCount;
  } else {
    throw std::invalid_argument("unknown sweep kind: " + kind);
  }
  const ExperimentReport report = RunSweep(config, sweep_kind);
  WriteReportFiles(report, config, "sweep-" + kind);
  std::cout << report.CurvesCsv();
  return 0;
}

int CmdTradeoff(const GlobalOpts& opts) {
  const ExperimentConfig config = LoadConfig(opts);
  const ExperimentReport report = RunTradeoff(config);
  WriteReportFiles(report, config, "tradeoff");
  std::cout << report.CurvesCsv();
  if (report.has_intersection) {
    std::cout << "intersection epsilon_star=" << report.epsilon_star
              << " value=" << report.value_at_star << '\n';
  } else {
    std::cout << "no intersection\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDP-perturbed recommendation pipeline experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts opts;
  app.add_option("--config", opts.config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", opts.seed, "master seed override");
  app.add_option("--out", opts.out_dir, "output directory override");
  app.add_flag("--full-scale", opts.full_scale, "scale dataset sizes x10 (paper scale)");

  auto* generate = app.add_subcommand("generate", "generate a synthetic profile dataset");
  auto* encode = app.add_subcommand("encode", "encode preferences into a Bloom filter");
  std::string values_csv;
  encode->add_option("--values", values_csv, "comma-separated preference values")->required();
  auto* perturb = app.add_subcommand("perturb", "emit perturbed report records");
  std::string perturb_values, client_id = "client0";
  size_t perturb_sessions = 1;
  perturb->add_option("--values", perturb_values, "comma-separated preference values")
      ->required();
  perturb->add_option("--client", client_id, "client id");
  perturb->add_option("--sessions", perturb_sessions, "number of reports to emit");
  auto* train = app.add_subcommand("train", "train per-category decoders");
  auto* cluster = app.add_subcommand("cluster", "elbow scan and kmeans on exact profiles");
  auto* attack = app.add_subcommand("attack", "privacy attack games");
  attack->require_subcommand(1);
  auto* attack_basic = attack->add_subcommand("basic", "Bayes single-preference game");
  size_t trials = 2000;
  attack_basic->add_option("--trials", trials, "trials per grid point");
  auto* attack_advanced = attack->add_subcommand("advanced", "ML multi-preference game");
  auto* attack_averaging = attack->add_subcommand("averaging", "averaging attack");
  std::string avg_values;
  size_t observations = 100000;
  attack_averaging->add_option("--values", avg_values, "target preference values");
  attack_averaging->add_option("--observations", observations, "number of reports");
  auto* pipeline = app.add_subcommand("pipeline", "end-to-end pipeline run");
  auto* sweep = app.add_subcommand("sweep", "pipeline sweep over a parameter grid");
  std::string sweep_kind = "epsilon";
  sweep->add_option("--sweep", sweep_kind, "epsilon | bloom_size | hash_count");
  auto* tradeoff = app.add_subcommand("tradeoff", "privacy vs utility trade-off curves");

  CLI11_PARSE(app, argc, argv);
  opts.seed_set = seed_opt->count() > 0;

  try {
    if (*generate) return CmdGenerate(opts);
    if (*encode) return CmdEncode(opts, values_csv);
    if (*perturb) return CmdPerturb(opts, perturb_values, client_id, perturb_sessions);
    if (*train) return CmdTrain(opts);
    if (*cluster) return CmdCluster(opts);
    if (*attack_basic) return CmdAttackBasic(opts, trials);
    if (*attack_advanced) return CmdAttackAdvanced(opts);
    if (*attack_averaging) return CmdAttackAveraging(opts, avg_values, observations);
    if (*pipeline) return CmdPipeline(opts);
    if (*sweep) return CmdSweep(opts, sweep_kind);
    if (*tradeoff) return CmdTradeoff(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
