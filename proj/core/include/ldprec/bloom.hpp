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

#ifndef LDPREC_BLOOM_HPP_
#define LDPREC_BLOOM_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ldprec/bitvector.hpp"

namespace ldprec {

// Bloom filter geometry plus the hash seed.  `n` is the expected number of
// encoded preferences and `f_p` the target false-positive rate used when the
// size is derived rather than given.
struct BloomParams {
  size_t m = 0;           // bit count
  size_t k = 0;           // hash-function count
  size_t n = 1;           // expected encoded-preference count
  double f_p = 0.1;       // target false-positive rate, in (0,1)
  uint64_t hash_seed = 0;

  void Validate() const;
};

// Optimal bit count for n expected entries at false-positive rate f_p:
// ceil(-n*ln(f_p) / (ln 2)^2).
size_t OptimalM(size_t n, double f_p);

// Optimal hash count for m bits and n entries: round-half-up((m/n)*ln 2),
// floored at 1.
size_t OptimalK(size_t m, size_t n);

// The k bit indices for one value under double hashing:
// index_i = (h_a + i*h_b) mod m with h_b forced odd.  Values are hashed as
// the UTF-8 bytes of the exact string.
std::vector<size_t> BloomIndices(std::string_view value, const BloomParams& params);

// Builds the length-m filter with all k indices of every value set.
// Throws on an empty value set or an empty value string.
BitVector BloomEncode(const std::vector<std::string>& values, const BloomParams& params);

// Membership probe: true iff all k indices of `value` are set.  No false
// negatives for encoded values.
bool BloomContains(const BitVector& bv, std::string_view value, const BloomParams& params);

}  // namespace ldprec

#endif  // LDPREC_BLOOM_HPP_
