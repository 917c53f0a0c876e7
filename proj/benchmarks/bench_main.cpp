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

#include <benchmark/benchmark.h>

#include "ldprec/attacks.hpp"
#include "ldprec/bloom.hpp"
#include "ldprec/dataset.hpp"
#include "ldprec/kmeans.hpp"
#include "ldprec/mlp.hpp"
#include "ldprec/perturbation.hpp"
#include "ldprec/rng.hpp"

namespace {

using namespace ldprec;

const BloomParams kBloom{.m = 144, .k = 3, .n = 27, .f_p = 0.1, .hash_seed = 42};
const PrivacyParams kPriv{.f = 0.5, .p = 0.5, .q = 0.75, .k = 3};

void BM_BloomEncode(benchmark::State& state) {
  const std::vector<std::string> values = {"Action", "Jazz", "Sport05"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(BloomEncode(values, kBloom));
  }
}
BENCHMARK(BM_BloomEncode);

void BM_PerturbChannel(benchmark::State& state) {
  const BitVector b = BloomEncode({"Action", "Jazz", "Sport05"}, kBloom);
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Irr(Prr(b, kPriv.f, rng), kPriv.p, kPriv.q, rng));
  }
  state.SetItemsProcessed(state.iterations() * kBloom.m);
}
BENCHMARK(BM_PerturbChannel);

void BM_SessionMeans(benchmark::State& state) {
  const BitVector b = BloomEncode({"Action", "Jazz", "Sport05"}, kBloom);
  Rng prr_rng(2);
  const BitVector b_prime = Prr(b, kPriv.f, prr_rng);
  const size_t sessions = state.range(0);
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SessionMeans(b_prime, kPriv, sessions, rng));
  }
  state.SetItemsProcessed(state.iterations() * kBloom.m * sessions);
}
BENCHMARK(BM_SessionMeans)->Arg(100)->Arg(400);

void BM_BayesGuess(benchmark::State& state) {
  AttackSetup setup;
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  for (const auto& cat : tax.categories) {
    for (const auto& cls : cat.classes) setup.universe.push_back(cls);
  }
  setup.bloom = kBloom;
  setup.priv = kPriv;
  const BayesGuesser guesser(setup);
  Rng rng(4);
  BitVector observed(kBloom.m);
  for (size_t i = 0; i < kBloom.m; ++i) observed.Set(i, rng.Bernoulli(0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(guesser.Guess(observed));
  }
}
BENCHMARK(BM_BayesGuess);

void BM_MlpTrainEpoch(benchmark::State& state) {
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  const LabeledDataset ds = GenerateDataset(tax, 700, std::nullopt, 5);
  TrainingSet set;
  for (const auto& p : ds.profiles) {
    set.inputs.push_back(BloomEncode(ProfileValues(tax, p), kBloom));
    set.labels.push_back(p.selections[1]);
  }
  MlpConfig cfg;
  cfg.input_size = kBloom.m;
  cfg.output_size = 8;
  cfg.epochs = 1;
  cfg.seed = 6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrainMlp(set, cfg));
  }
  state.SetItemsProcessed(state.iterations() * set.inputs.size());
}
BENCHMARK(BM_MlpTrainEpoch);

void BM_KMeans(benchmark::State& state) {
  const Taxonomy tax = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  const LabeledDataset ds =
      GenerateArchetypeDataset(tax, 2000, DefaultArchetypes(tax, 4), 0.1, 7);
  const Eigen::MatrixXd features = OneHotFeatures(ds.profiles, tax);
  for (auto _ : state) {
    benchmark::DoNotOptimize(KMeansCluster(features, 4, 8));
  }
  state.SetItemsProcessed(state.iterations() * ds.profiles.size());
}
BENCHMARK(BM_KMeans);

}  // namespace

BENCHMARK_MAIN();
