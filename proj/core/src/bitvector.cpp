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

#include "ldprec/bitvector.hpp"

#include <bit>
#include <stdexcept>

namespace ldprec {

size_t BitVector::Popcount() const {
  size_t n = 0;
  for (uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool BitVector::Covers(const BitVector& other) const {
  if (length_ != other.length_) {
    throw std::invalid_argument("BitVector::Covers: length mismatch");
  }
  for (size_t i = 0; i < words_.size(); ++i) {
    if ((other.words_[i] & ~words_[i]) != 0) return false;
  }
  return true;
}

size_t BitVector::HammingDistance(const BitVector& other) const {
  if (length_ != other.length_) {
    throw std::invalid_argument("BitVector::HammingDistance: length mismatch");
  }
  size_t n = 0;
  for (size_t i = 0; i < words_.size(); ++i) {
    n += std::popcount(words_[i] ^ other.words_[i]);
  }
  return n;
}

std::string BitVector::ToHex() const {
  static const char* kDigits = "0123456789abcdef";
  std::string out = std::to_string(length_);
  out.push_back(':');
  const size_t bytes = (length_ + 7) / 8;
  for (size_t b = 0; b < bytes; ++b) {
    const uint8_t byte = static_cast<uint8_t>(words_[b >> 3] >> ((b & 7) * 8));
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xf]);
  }
  return out;
}

namespace {
int HexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  throw std::invalid_argument("BitVector::FromHex: bad hex digit");
}
}  // namespace

BitVector BitVector::FromHex(const std::string& text) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("BitVector::FromHex: missing length prefix");
  }
  const size_t length = std::stoull(text.substr(0, colon));
  const std::string hex = text.substr(colon + 1);
  const size_t bytes = (length + 7) / 8;
  if (hex.size() != bytes * 2) {
    throw std::invalid_argument("BitVector::FromHex: payload size mismatch");
  }
  BitVector bv(length);
  for (size_t b = 0; b < bytes; ++b) {
    const uint8_t byte =
        static_cast<uint8_t>((HexNibble(hex[2 * b]) << 4) | HexNibble(hex[2 * b + 1]));
    bv.words_[b >> 3] |= uint64_t{byte} << ((b & 7) * 8);
  }
  // Reject set bits beyond the declared length.
  for (size_t i = length; i < bytes * 8; ++i) {
    if (bv.Get(i)) throw std::invalid_argument("BitVector::FromHex: bit past length");
  }
  return bv;
}

}  // namespace ldprec
