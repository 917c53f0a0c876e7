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

#ifndef LDPREC_ATTACKS_HPP_
#define LDPREC_ATTACKS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ldprec/bitvector.hpp"
#include "ldprec/bloom.hpp"
#include "ldprec/dataset.hpp"
#include "ldprec/metrics.hpp"
#include "ldprec/mlp.hpp"
#include "ldprec/perturbation.hpp"

namespace ldprec {

// The basic adversary's world: candidate preference universe, mechanism
// parameters and a prior over the universe (uniform by default).
struct AttackSetup {
  std::vector<std::string> universe;
  BloomParams bloom;
  PrivacyParams priv;
  std::vector<double> prior;  // empty means uniform

  void Validate() const;
};

struct AttackResult {
  size_t trials = 0;
  size_t successes = 0;
  double success_rate = 0.0;
  std::vector<std::pair<size_t, size_t>> trial_log;  // (guess, truth) indices

  std::string TrialsCsv() const;
};

// Probability that a perturbed bit reads 1 under the single-round
// abstraction with neighborhood parameter delta:
//   e^(eps/2*delta) / (e^(eps/2*delta) + 1)  if the original bit is 1,
//   1 / (e^(eps/2*delta) + 1)                otherwise.
double SingleBitFlipProb(double epsilon, size_t delta, int original_bit);

// The probability that all k set bits of an encoded value survive as 1
// under that abstraction; the analytic basic-adversary success curve.
double AnalyticKeepAllProb(double epsilon, size_t k);

// Bayesian single-preference guesser.  Likelihoods use the true
// end-to-end per-bit channel (p', q'), computed in the log domain.
class BayesGuesser {
 public:
  explicit BayesGuesser(const AttackSetup& setup);

  // Returns (argmax of prior x likelihood, normalized posterior); ties go
  // to the lowest index.
  std::pair<size_t, std::vector<double>> Guess(const BitVector& observed) const;

  const AttackSetup& setup() const { return setup_; }

 private:
  AttackSetup setup_;
  std::vector<BitVector> encodings_;
  double log_p1_, log_p0_, log_q1_, log_q0_;
};

// The plausible-deniability game over one preference: per trial, sample a
// value from the prior, push it through PRR+IRR, and let the Bayes guesser
// try to recover it.
AttackResult RunBasicGame(const AttackSetup& setup, size_t trials, uint64_t seed);

// The multi-preference game: the adversary trains the pipeline MLP on
// labeled perturbed profiles and decodes fresh ones.  Success rate is the
// decoding accuracy on the named category.
struct AdvancedGameResult {
  AttackResult attack;
  ClassificationReport report;
};

AdvancedGameResult RunAdvancedGame(const LabeledDataset& train, const LabeledDataset& test,
                                   size_t category_index, const PrivacyParams& priv,
                                   const BloomParams& bloom, MlpConfig decoder_config,
                                   uint64_t seed);

// Convenience form matching the uniform-data setup: generates train/test
// sets of the given sizes from the taxonomy.
AdvancedGameResult RunAdvancedGame(const Taxonomy& taxonomy, size_t category_index,
                                   size_t train_size, size_t test_size,
                                   const PrivacyParams& priv, const BloomParams& bloom,
                                   MlpConfig decoder_config, uint64_t seed);

// Averaging attack: many IRR reports of one client's fixed preference set,
// per-bit means thresholded at (p'+q')/2.
struct AveragingGameResult {
  std::vector<double> bit_means;
  BitVector estimate;
  BitVector b;        // clean Bloom filter
  BitVector b_prime;  // memoized permanent response
  size_t hamming_to_b = 0;
  size_t hamming_to_b_prime = 0;
  bool recovered_b_prime = false;  // estimate == B'
};

AveragingGameResult RunAveragingGame(const std::vector<std::string>& client_values,
                                     const PrivacyParams& priv, const BloomParams& bloom,
                                     size_t observations, uint64_t seed);

// Report-space encoding of a profile dataset: one perturbed report per
// profile (PRR fresh per client, one IRR draw), plus per-category labels.
std::vector<BitVector> PerturbProfiles(const LabeledDataset& dataset,
                                       const PrivacyParams& priv, const BloomParams& bloom,
                                       uint64_t seed);

std::vector<std::string> ProfileValues(const Taxonomy& taxonomy, const Profile& profile);

}  // namespace ldprec

#endif  // LDPREC_ATTACKS_HPP_
