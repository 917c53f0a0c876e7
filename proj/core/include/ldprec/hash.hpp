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

#ifndef LDPREC_HASH_HPP_
#define LDPREC_HASH_HPP_

#include <cstdint>
#include <string_view>

#include "ldprec/rng.hpp"

namespace ldprec {

// Seeded 64-bit hash of a byte string: FNV-1a over the UTF-8 bytes with the
// seed mixed into the initial basis, then a splitmix64-style avalanche.
// Deterministic across platforms; not cryptographic.
inline uint64_t SeededHash64(std::string_view bytes, uint64_t seed) {
  uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

// Order-independent digest of a set of strings (XOR of member hashes mixed
// with a set-size tweak).  Used for memo keys over preference sets.
inline uint64_t SetDigest64(const auto& values, uint64_t seed) {
  uint64_t acc = 0;
  uint64_t n = 0;
  for (const auto& v : values) {
    acc ^= SeededHash64(v, seed);
    ++n;
  }
  uint64_t state = acc ^ (n * 0xd1b54a32d192ed03ULL) ^ seed;
  return SplitMix64Next(state);
}

}  // namespace ldprec

#endif  // LDPREC_HASH_HPP_
