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

#ifndef LDPREC_BITVECTOR_HPP_
#define LDPREC_BITVECTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ldprec {

// Fixed-length bit array.  The length is set at construction and never
// changes; this is the Bloom filter B and the perturbed vectors derived
// from it.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(size_t length) : length_(length), words_((length + 63) / 64, 0) {}

  size_t length() const { return length_; }

  bool Get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void Set(size_t i, bool value = true) {
    const uint64_t mask = uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  size_t Popcount() const;

  // True iff every set bit of `other` is also set here.
  bool Covers(const BitVector& other) const;

  size_t HammingDistance(const BitVector& other) const;

  bool operator==(const BitVector& other) const {
    return length_ == other.length_ && words_ == other.words_;
  }

  // Serialization: "<length>:<hex>" where the bit array is packed
  // little-endian within bytes (bit i goes to bit i%8 of byte i/8) and the
  // bytes are emitted in order as lowercase hex.
  std::string ToHex() const;
  static BitVector FromHex(const std::string& text);

 private:
  size_t length_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace ldprec

#endif  // LDPREC_BITVECTOR_HPP_
