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

#include "ldprec/attacks.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ldprec/hash.hpp"
#include "ldprec/rng.hpp"

namespace ldprec {

void AttackSetup::Validate() const {
  if (universe.size() < 2) throw std::invalid_argument("AttackSetup: |D| must be >= 2");
  bloom.Validate();
  priv.Validate(/*allow_degenerate=*/true);
  if (!prior.empty()) {
    if (prior.size() != universe.size()) {
      throw std::invalid_argument("AttackSetup: prior size != |D|");
    }
    double sum = 0.0;
    for (double x : prior) {
      if (x < 0.0) throw std::invalid_argument("AttackSetup: negative prior");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("AttackSetup: prior must sum to 1");
    }
  }
}

double SingleBitFlipProb(double epsilon, size_t delta, int original_bit) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("SingleBitFlipProb: epsilon > 0");
  if (delta == 0) throw std::invalid_argument("SingleBitFlipProb: delta >= 1");
  const double e = std::exp(epsilon / (2.0 * static_cast<double>(delta)));
  return original_bit ? e / (e + 1.0) : 1.0 / (e + 1.0);
}

double AnalyticKeepAllProb(double epsilon, size_t k) {
  return std::pow(SingleBitFlipProb(epsilon, k, 1), static_cast<double>(k));
}

BayesGuesser::BayesGuesser(const AttackSetup& setup) : setup_(setup) {
  setup_.Validate();
  if (setup_.prior.empty()) {
    setup_.prior.assign(setup_.universe.size(), 1.0 / static_cast<double>(setup_.universe.size()));
  }
  encodings_.reserve(setup_.universe.size());
  for (const auto& v : setup_.universe) {
    encodings_.push_back(BloomEncode({v}, setup_.bloom));
  }
  const auto [pp, qp] = ChannelProbs(setup_.priv.f, setup_.priv.p, setup_.priv.q);
  log_p1_ = std::log(pp);
  log_p0_ = std::log(1.0 - pp);
  log_q1_ = std::log(qp);
  log_q0_ = std::log(1.0 - qp);
}

std::pair<size_t, std::vector<double>> BayesGuesser::Guess(const BitVector& observed) const {
  if (observed.length() != setup_.bloom.m) {
    throw std::invalid_argument("BayesGuesser::Guess: observed length != m");
  }
  const size_t n = setup_.universe.size();
  std::vector<double> log_post(n);
  double best_logpost = -std::numeric_limits<double>::infinity();
  size_t best = 0;
  for (size_t v = 0; v < n; ++v) {
    double ll = std::log(setup_.prior[v]);
    const BitVector& enc = encodings_[v];
    for (size_t i = 0; i < observed.length(); ++i) {
      const bool s = observed.Get(i);
      ll += enc.Get(i) ? (s ? log_q1_ : log_q0_) : (s ? log_p1_ : log_p0_);
    }
    log_post[v] = ll;
    if (ll > best_logpost) {
      best_logpost = ll;
      best = v;
    }
  }
  if (std::isinf(best_logpost) && best_logpost < 0) {
    throw std::runtime_error("BayesGuesser::Guess: all likelihoods are zero");
  }
  // Normalize in the log domain.
  double lse = 0.0;
  for (double lp : log_post) lse += std::exp(lp - best_logpost);
  lse = best_logpost + std::log(lse);
  std::vector<double> posterior(n);
  for (size_t v = 0; v < n; ++v) posterior[v] = std::exp(log_post[v] - lse);
  return {best, posterior};
}

AttackResult RunBasicGame(const AttackSetup& setup, size_t trials, uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("RunBasicGame: trials >= 1");
  BayesGuesser guesser(setup);
  const auto& resolved = guesser.setup();

  AttackResult result;
  result.trials = trials;
  result.trial_log.reserve(trials);
  RngFactory factory(seed);
  for (size_t t = 0; t < trials; ++t) {
    Rng rng = factory.Stream({0x6261 /* "ba" */, t});
    // Sample the secret from the prior.
    const double u = rng.NextDouble();
    double acc = 0.0;
    size_t truth = resolved.universe.size() - 1;
    for (size_t v = 0; v < resolved.universe.size(); ++v) {
      acc += resolved.prior[v];
      if (u < acc) {
        truth = v;
        break;
      }
    }
    const BitVector b = BloomEncode({resolved.universe[truth]}, resolved.bloom);
    const BitVector b_prime = Prr(b, resolved.priv.f, rng);
    const BitVector s = Irr(b_prime, resolved.priv.p, resolved.priv.q, rng);
    const size_t guess = guesser.Guess(s).first;
    result.successes += guess == truth;
    result.trial_log.emplace_back(guess, truth);
  }
  result.success_rate = static_cast<double>(result.successes) / static_cast<double>(trials);
  return result;
}

std::vector<std::string> ProfileValues(const Taxonomy& taxonomy, const Profile& profile) {
  std::vector<std::string> values;
  values.reserve(profile.selections.size());
  for (size_t j = 0; j < profile.selections.size(); ++j) {
    values.push_back(taxonomy.categories[j].classes[profile.selections[j]]);
  }
  return values;
}

std::vector<BitVector> PerturbProfiles(const LabeledDataset& dataset,
                                       const PrivacyParams& priv, const BloomParams& bloom,
                                       uint64_t seed) {
  std::vector<BitVector> reports;
  reports.reserve(dataset.profiles.size());
  RngFactory factory(seed);
  for (size_t i = 0; i < dataset.profiles.size(); ++i) {
    Rng rng = factory.Stream({0x7270 /* "rp" */, i});
    const BitVector b = BloomEncode(ProfileValues(dataset.taxonomy, dataset.profiles[i]), bloom);
    const BitVector b_prime = Prr(b, priv.f, rng);
    reports.push_back(Irr(b_prime, priv.p, priv.q, rng));
  }
  return reports;
}

AdvancedGameResult RunAdvancedGame(const LabeledDataset& train, const LabeledDataset& test,
                                   size_t category_index, const PrivacyParams& priv,
                                   const BloomParams& bloom, MlpConfig decoder_config,
                                   uint64_t seed) {
  if (category_index >= train.taxonomy.categories.size()) {
    throw std::invalid_argument("RunAdvancedGame: category index out of range");
  }
  RngFactory factory(seed);

  TrainingSet train_set;
  train_set.inputs = PerturbProfiles(train, priv, bloom, factory.Stream(0x7472).NextU64());
  for (const auto& p : train.profiles) train_set.labels.push_back(p.selections[category_index]);

  TrainingSet test_set;
  test_set.inputs = PerturbProfiles(test, priv, bloom, factory.Stream(0x7465).NextU64());
  for (const auto& p : test.profiles) test_set.labels.push_back(p.selections[category_index]);

  decoder_config.input_size = bloom.m;
  decoder_config.output_size = train.taxonomy.categories[category_index].classes.size();
  decoder_config.seed = factory.Stream(0x6d6c).NextU64();
  const MlpModel model = TrainMlp(train_set, decoder_config);

  AdvancedGameResult result;
  result.report = Evaluate(model, test_set);
  result.attack.trials = test_set.labels.size();
  const std::vector<size_t> pred = PredictLabels(model, ToMatrix(test_set.inputs));
  for (size_t i = 0; i < pred.size(); ++i) {
    result.attack.successes += pred[i] == test_set.labels[i];
    result.attack.trial_log.emplace_back(pred[i], test_set.labels[i]);
  }
  result.attack.success_rate =
      static_cast<double>(result.attack.successes) / static_cast<double>(result.attack.trials);
  return result;
}

AdvancedGameResult RunAdvancedGame(const Taxonomy& taxonomy, size_t category_index,
                                   size_t train_size, size_t test_size,
                                   const PrivacyParams& priv, const BloomParams& bloom,
                                   MlpConfig decoder_config, uint64_t seed) {
  if (train_size == 0 || test_size == 0) {
    throw std::invalid_argument("RunAdvancedGame: train_size, test_size >= 1");
  }
  RngFactory factory(seed);
  const LabeledDataset train =
      GenerateDataset(taxonomy, train_size, std::nullopt, factory.Stream(1).NextU64());
  const LabeledDataset test =
      GenerateDataset(taxonomy, test_size, std::nullopt, factory.Stream(2).NextU64());
  return RunAdvancedGame(train, test, category_index, priv, bloom, decoder_config,
                         factory.Stream(3).NextU64());
}

AveragingGameResult RunAveragingGame(const std::vector<std::string>& client_values,
                                     const PrivacyParams& priv, const BloomParams& bloom,
                                     size_t observations, uint64_t seed) {
  if (observations == 0) throw std::invalid_argument("RunAveragingGame: observations >= 1");
  AveragingGameResult out;
  out.b = BloomEncode(client_values, bloom);

  ClientState state(seed);
  out.b_prime = state.PermanentResponse("averaging-target", client_values, bloom, priv);

  Rng rng = RngFactory(seed).Stream(0x6176 /* "av" */);
  out.bit_means = SessionMeans(out.b_prime, priv, observations, rng);
  out.estimate = ThresholdMeans(out.bit_means, priv);
  out.hamming_to_b = out.estimate.HammingDistance(out.b);
  out.hamming_to_b_prime = out.estimate.HammingDistance(out.b_prime);
  out.recovered_b_prime = out.estimate == out.b_prime;
  return out;
}

std::string AttackResult::TrialsCsv() const {
  std::ostringstream out;
  out << "guess,truth\n";
  for (const auto& [guess, truth] : trial_log) out << guess << ',' << truth << '\n';
  return out.str();
}

}  // namespace ldprec
