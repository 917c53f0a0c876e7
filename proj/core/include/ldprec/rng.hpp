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

#ifndef LDPREC_RNG_HPP_
#define LDPREC_RNG_HPP_

#include <cstdint>
#include <initializer_list>

namespace ldprec {

// splitmix64 finalizer; also used to stretch seeds into engine state.
inline uint64_t SplitMix64Next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with a portable, platform-independent output sequence.
// All stochastic code in the library draws from this engine so that a
// fixed seed yields bit-identical results everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = SplitMix64Next(sm);
  }

  uint64_t NextU64() {
    const uint64_t result = Rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = Rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double NextDouble() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return NextDouble() < p; }

  // Uniform integer in [0, n) by rejection, bias-free.
  uint64_t NextBelow(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = NextU64();
      if (r >= threshold) return r % n;
    }
  }

  // Number of successes in `n` Bernoulli(p) trials.
  uint64_t Binomial(uint64_t n, double p) {
    uint64_t successes = 0;
    for (uint64_t i = 0; i < n; ++i) successes += Bernoulli(p);
    return successes;
  }

 private:
  static uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

// Derives independent substreams from one master seed.  Streams are
// identified by a list of ids, so trial results do not depend on the
// order in which substreams are created or consumed.
class RngFactory {
 public:
  explicit RngFactory(uint64_t master_seed) : master_(master_seed) {}

  Rng Stream(std::initializer_list<uint64_t> ids) const {
    uint64_t acc = master_;
    for (uint64_t id : ids) {
      uint64_t x = acc ^ (id + 0x9e3779b97f4a7c15ULL);
      acc = SplitMix64Next(x);
    }
    return Rng(acc);
  }

  Rng Stream(uint64_t id) const { return Stream({id}); }

  uint64_t master_seed() const { return master_; }

 private:
  uint64_t master_;
};

}  // namespace ldprec

#endif  // LDPREC_RNG_HPP_
