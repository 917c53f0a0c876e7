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

#include "ldprec/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldprec/hash.hpp"

#include "json.hpp"

namespace ldprec {

void PrivacyParams::Validate(bool allow_degenerate) const {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("PrivacyParams: f in [0,1]");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("PrivacyParams: p in [0,1]");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("PrivacyParams: q in [0,1]");
  if (k == 0) throw std::invalid_argument("PrivacyParams: k must be >= 1");
  if (allow_degenerate ? (p > q) : (p >= q)) {
    throw std::invalid_argument("PrivacyParams: p < q required for a useful channel");
  }
}

BitVector Prr(const BitVector& b, double f, Rng& rng) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("Prr: f in [0,1]");
  BitVector out(b.length());
  for (size_t i = 0; i < b.length(); ++i) {
    const double u = rng.NextDouble();
    if (u < f / 2) {
      out.Set(i, true);
    } else if (u < f) {
      out.Set(i, false);
    } else {
      out.Set(i, b.Get(i));
    }
  }
  return out;
}

BitVector Irr(const BitVector& b_prime, double p, double q, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("Irr: p, q in [0,1]");
  }
  BitVector out(b_prime.length());
  for (size_t i = 0; i < b_prime.length(); ++i) {
    out.Set(i, rng.Bernoulli(b_prime.Get(i) ? q : p));
  }
  return out;
}

double Epsilon1OfF(double f, size_t k) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("Epsilon1OfF: f in [0,1]");
  if (f == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k) * std::log((1.0 - f / 2) / (f / 2));
}

double FOfEpsilon1(double epsilon, size_t k) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("FOfEpsilon1: epsilon must be > 0");
  if (k == 0) throw std::invalid_argument("FOfEpsilon1: k must be >= 1");
  return 2.0 / (1.0 + std::exp(epsilon / static_cast<double>(k)));
}

std::pair<double, double> ChannelProbs(double f, double p, double q) {
  const double half_f = f / 2;
  const double p_prime = half_f * q + (1.0 - half_f) * p;
  const double q_prime = (1.0 - half_f) * q + half_f * p;
  return {p_prime, q_prime};
}

double Epsilon2Of(double f, double p, double q, size_t k) {
  const auto [pp, qp] = ChannelProbs(f, p, q);
  if (qp < pp - 1e-15) throw std::invalid_argument("Epsilon2Of: invalid channel (q' < p')");
  if (qp <= pp + 1e-15) return 0.0;  // no-information boundary (f = 1)
  if (pp == 0.0 || qp == 1.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k) * std::log(qp * (1.0 - pp) / (pp * (1.0 - qp)));
}

BudgetReport ComputeBudgets(const PrivacyParams& priv) {
  BudgetReport r;
  r.epsilon1 = Epsilon1OfF(priv.f, priv.k);
  r.epsilon2 = Epsilon2Of(priv.f, priv.p, priv.q, priv.k);
  std::tie(r.p_prime, r.q_prime) = ChannelProbs(priv.f, priv.p, priv.q);
  return r;
}

uint64_t ClientState::MemoKeyDigest(const std::vector<std::string>& values,
                                    const BloomParams& bloom) const {
  // Order-independent over the value set, tied to the filter geometry.
  uint64_t digest = SetDigest64(values, bloom.hash_seed);
  digest ^= SplitMix64Next(digest) ^ (bloom.m * 0x9e3779b97f4a7c15ULL + bloom.k);
  return digest;
}

const BitVector& ClientState::PermanentResponse(const std::string& client_id,
                                                const std::vector<std::string>& values,
                                                const BloomParams& bloom,
                                                const PrivacyParams& priv) {
  const uint64_t digest = MemoKeyDigest(values, bloom);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find({client_id, digest});
  if (it != memo_.end()) return it->second;

  const BitVector b = BloomEncode(values, bloom);
  Rng rng = factory_.Stream({SeededHash64(client_id, 0x707272 /* "prr" */), digest});
  BitVector b_prime = Prr(b, priv.f, rng);
  auto [pos, inserted] = memo_.try_emplace({client_id, digest}, std::move(b_prime));
  return pos->second;
}

const BitVector* ClientState::Lookup(const std::string& client_id,
                                     const std::vector<std::string>& values,
                                     const BloomParams& bloom) const {
  const uint64_t digest = MemoKeyDigest(values, bloom);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find({client_id, digest});
  return it == memo_.end() ? nullptr : &it->second;
}

size_t ClientState::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.size();
}

BitVector PerturbReport(ClientState& state, const std::string& client_id,
                        const std::vector<std::string>& values, const BloomParams& bloom,
                        const PrivacyParams& priv, uint64_t session) {
  priv.Validate(/*allow_degenerate=*/true);
  const BitVector& b_prime = state.PermanentResponse(client_id, values, bloom, priv);
  Rng rng = RngFactory(state.seed())
                .Stream({0x697272 /* "irr" */, SeededHash64(client_id, 0), session});
  return Irr(b_prime, priv.p, priv.q, rng);
}

std::vector<double> SessionMeans(const BitVector& b_prime, const PrivacyParams& priv,
                                 size_t observations, Rng& rng) {
  if (observations == 0) throw std::invalid_argument("SessionMeans: observations >= 1");
  std::vector<double> means(b_prime.length());
  for (size_t i = 0; i < b_prime.length(); ++i) {
    const double prob = b_prime.Get(i) ? priv.q : priv.p;
    means[i] = static_cast<double>(rng.Binomial(observations, prob)) /
               static_cast<double>(observations);
  }
  return means;
}

BitVector ThresholdMeans(const std::vector<double>& means, const PrivacyParams& priv) {
  const auto [pp, qp] = ChannelProbs(priv.f, priv.p, priv.q);
  const double threshold = (pp + qp) / 2;
  BitVector out(means.size());
  for (size_t i = 0; i < means.size(); ++i) out.Set(i, means[i] > threshold);
  return out;
}

std::string ReportRecord::ToJsonLine() const {
  nlohmann::ordered_json j;
  j["client_id"] = client_id;
  j["bits"] = bits.ToHex();
  j["m"] = m;
  j["k"] = k;
  j["f"] = f;
  j["p"] = p;
  j["q"] = q;
  j["epsilon1"] = epsilon1;
  j["epsilon2"] = epsilon2;
  j["session_counter"] = session_counter;
  return j.dump();
}

ReportRecord ReportRecord::FromJsonLine(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  ReportRecord r;
  r.client_id = j.at("client_id").get<std::string>();
  r.bits = BitVector::FromHex(j.at("bits").get<std::string>());
  r.m = j.at("m").get<size_t>();
  r.k = j.at("k").get<size_t>();
  r.f = j.at("f").get<double>();
  r.p = j.at("p").get<double>();
  r.q = j.at("q").get<double>();
  r.epsilon1 = j.at("epsilon1").get<double>();
  r.epsilon2 = j.at("epsilon2").get<double>();
  r.session_counter = j.at("session_counter").get<uint64_t>();
  return r;
}

}  // namespace ldprec
