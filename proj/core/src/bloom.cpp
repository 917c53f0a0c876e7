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

#include "ldprec/bloom.hpp"

#include <cmath>
#include <stdexcept>

#include "ldprec/hash.hpp"

namespace ldprec {

void BloomParams::Validate() const {
  if (m == 0) throw std::invalid_argument("BloomParams: m must be >= 1");
  if (k == 0) throw std::invalid_argument("BloomParams: k must be >= 1");
  if (n == 0) throw std::invalid_argument("BloomParams: n must be >= 1");
  if (!(f_p > 0.0 && f_p < 1.0)) {
    throw std::invalid_argument("BloomParams: f_p must be in (0,1)");
  }
}

size_t OptimalM(size_t n, double f_p) {
  if (n == 0) throw std::invalid_argument("OptimalM: n must be >= 1");
  if (!(f_p > 0.0 && f_p < 1.0)) {
    throw std::invalid_argument("OptimalM: f_p must be in (0,1)");
  }
  const double ln2 = std::log(2.0);
  return static_cast<size_t>(std::ceil(-static_cast<double>(n) * std::log(f_p) / (ln2 * ln2)));
}

size_t OptimalK(size_t m, size_t n) {
  if (m == 0 || n == 0) throw std::invalid_argument("OptimalK: m and n must be >= 1");
  const double k = std::floor(static_cast<double>(m) / static_cast<double>(n) * std::log(2.0) + 0.5);
  return k < 1.0 ? 1 : static_cast<size_t>(k);
}

std::vector<size_t> BloomIndices(std::string_view value, const BloomParams& params) {
  if (value.empty()) throw std::invalid_argument("BloomIndices: empty value string");
  const uint64_t ha = SeededHash64(value, params.hash_seed);
  const uint64_t hb = SeededHash64(value, params.hash_seed ^ 0x9e3779b97f4a7c15ULL) | 1u;
  std::vector<size_t> indices(params.k);
  for (size_t i = 0; i < params.k; ++i) {
    indices[i] = static_cast<size_t>((ha + i * hb) % params.m);
  }
  return indices;
}

BitVector BloomEncode(const std::vector<std::string>& values, const BloomParams& params) {
  params.Validate();
  if (values.empty()) throw std::invalid_argument("BloomEncode: empty value set");
  BitVector bv(params.m);
  for (const auto& v : values) {
    for (size_t idx : BloomIndices(v, params)) bv.Set(idx);
  }
  return bv;
}

bool BloomContains(const BitVector& bv, std::string_view value, const BloomParams& params) {
  if (bv.length() != params.m) {
    throw std::invalid_argument("BloomContains: vector length != params.m");
  }
  for (size_t idx : BloomIndices(value, params)) {
    if (!bv.Get(idx)) return false;
  }
  return true;
}

}  // namespace ldprec
