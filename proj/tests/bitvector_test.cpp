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

#include <stdexcept>

#include "gtest/gtest.h"

#include "ldprec/rng.hpp"

namespace ldprec {
namespace {

TEST(BitVector, SetGetPopcount) {
  BitVector bv(10);
  EXPECT_EQ(bv.Popcount(), 0u);
  bv.Set(3);
  bv.Set(6);
  EXPECT_TRUE(bv.Get(3));
  EXPECT_TRUE(bv.Get(6));
  EXPECT_FALSE(bv.Get(0));
  EXPECT_EQ(bv.Popcount(), 2u);
  bv.Set(3, false);
  EXPECT_EQ(bv.Popcount(), 1u);
}

TEST(BitVector, HexFormat) {
  // Little-endian packing within bytes: bit 3 -> 0x08, bit 6 -> 0x40.
  BitVector bv(10);
  bv.Set(3);
  bv.Set(6);
  EXPECT_EQ(bv.ToHex(), "10:4800");

  BitVector parsed = BitVector::FromHex("10:4800");
  EXPECT_EQ(parsed, bv);
}

TEST(BitVector, HexRoundTripRandom) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t len = 1 + rng.NextBelow(300);
    BitVector bv(len);
    for (size_t i = 0; i < len; ++i) bv.Set(i, rng.Bernoulli(0.4));
    EXPECT_EQ(BitVector::FromHex(bv.ToHex()), bv);
  }
}

TEST(BitVector, FromHexRejectsMalformed) {
  EXPECT_THROW(BitVector::FromHex("4800"), std::invalid_argument);
  EXPECT_THROW(BitVector::FromHex("10:48"), std::invalid_argument);
  EXPECT_THROW(BitVector::FromHex("10:48zz"), std::invalid_argument);
  // Bit 10 of a 10-bit vector (first bit of the second byte).
  EXPECT_THROW(BitVector::FromHex("10:0004"), std::invalid_argument);
}

TEST(BitVector, CoversAndHamming) {
  BitVector a(16), b(16);
  a.Set(1);
  a.Set(5);
  a.Set(9);
  b.Set(1);
  b.Set(9);
  EXPECT_TRUE(a.Covers(b));
  EXPECT_FALSE(b.Covers(a));
  EXPECT_EQ(a.HammingDistance(b), 1u);

  BitVector c(8);
  EXPECT_THROW(a.Covers(c), std::invalid_argument);
  EXPECT_THROW(a.HammingDistance(c), std::invalid_argument);
}

}  // namespace
}  // namespace ldprec
