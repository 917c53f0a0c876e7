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

#ifndef LDPREC_PERTURBATION_HPP_
#define LDPREC_PERTURBATION_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ldprec/bitvector.hpp"
#include "ldprec/bloom.hpp"
#include "ldprec/rng.hpp"

namespace ldprec {

// Two-round randomized-response parameters.  f drives the permanent round;
// p and q are the per-report probabilities of emitting 1 given the
// memoized bit is 0 resp. 1.
struct PrivacyParams {
  double f = 0.5;
  double p = 0.5;
  double q = 0.75;
  size_t k = 1;  // hash count, shared with BloomParams

  // `allow_degenerate` permits p == q (a useless channel) for tests.
  void Validate(bool allow_degenerate = false) const;
};

// Derived budgets and end-to-end bit probabilities.  epsilon1 is the
// permanent (long-term) budget, epsilon2 the per-report budget.
struct BudgetReport {
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  double p_prime = 0.0;
  double q_prime = 0.0;
};

// Permanent randomized response: each output bit is 1 w.p. f/2, 0 w.p. f/2,
// and the input bit w.p. 1-f.
BitVector Prr(const BitVector& b, double f, Rng& rng);

// Instantaneous randomized response: each output bit is 1 w.p. q where the
// input bit is 1 and w.p. p where it is 0.
BitVector Irr(const BitVector& b_prime, double p, double q, Rng& rng);

// Permanent budget k*ln((1-f/2)/(f/2)); +infinity for f = 0.
double Epsilon1OfF(double f, size_t k);

// Inverse of Epsilon1OfF in f: 2/(1+e^(epsilon/k)).
double FOfEpsilon1(double epsilon, size_t k);

// End-to-end probabilities that a reported bit reads 1:
//   p' = (f/2)q + (1-f/2)p   (original Bloom bit 0)
//   q' = (1-f/2)q + (f/2)p   (original Bloom bit 1)
std::pair<double, double> ChannelProbs(double f, double p, double q);

// Per-report budget k*ln(q'(1-p') / (p'(1-q'))).  Returns 0 at the
// no-information boundary q' == p' (f = 1); +infinity when p' = 0, q' = 1;
// throws when q' < p'.
double Epsilon2Of(double f, double p, double q, size_t k);

BudgetReport ComputeBudgets(const PrivacyParams& priv);

// Per-client memo of permanent randomizations: (client, preference-set
// digest) -> B'.  An entry is written at most once; lookups after that
// always return the identical vector.  Insert-if-absent is atomic.
class ClientState {
 public:
  explicit ClientState(uint64_t rng_seed) : factory_(rng_seed) {}

  // Returns the memoized B' for this key, computing prr(bloom(values), f)
  // on first use.
  const BitVector& PermanentResponse(const std::string& client_id,
                                     const std::vector<std::string>& values,
                                     const BloomParams& bloom, const PrivacyParams& priv);

  // Test hook: the memo entry if present.
  const BitVector* Lookup(const std::string& client_id,
                          const std::vector<std::string>& values,
                          const BloomParams& bloom) const;

  size_t size() const;

  uint64_t seed() const { return factory_.master_seed(); }

 private:
  uint64_t MemoKeyDigest(const std::vector<std::string>& values,
                         const BloomParams& bloom) const;

  RngFactory factory_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, uint64_t>, BitVector> memo_;
};

// One client report: encode -> memoized PRR -> fresh IRR.  Fresh
// randomness is derived from (client, session) so sessions are
// order-independent.
BitVector PerturbReport(ClientState& state, const std::string& client_id,
                        const std::vector<std::string>& values, const BloomParams& bloom,
                        const PrivacyParams& priv, uint64_t session);

// Per-bit mean of `observations` IRR reports over one memoized B'.
// Distributionally identical to averaging that many PerturbReport calls.
std::vector<double> SessionMeans(const BitVector& b_prime, const PrivacyParams& priv,
                                 size_t observations, Rng& rng);

// Thresholds per-bit session means at (p'+q')/2, the recommender's (and
// the averaging adversary's) estimate of B'.
BitVector ThresholdMeans(const std::vector<double>& means, const PrivacyParams& priv);

// One line per report, JSON object with client_id, bits (hex), m, k, f, p,
// q, epsilon1, epsilon2, session_counter.  Bit-exact round-trip.
struct ReportRecord {
  std::string client_id;
  BitVector bits;
  size_t m = 0;
  size_t k = 0;
  double f = 0.0;
  double p = 0.0;
  double q = 0.0;
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  uint64_t session_counter = 0;

  std::string ToJsonLine() const;
  static ReportRecord FromJsonLine(const std::string& line);
};

}  // namespace ldprec

#endif  // LDPREC_PERTURBATION_HPP_
