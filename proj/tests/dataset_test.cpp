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

#include "ldprec/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "gtest/gtest.h"

namespace ldprec {
namespace {

TEST(Taxonomy, BuiltinPreferenceShape) {
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  ASSERT_EQ(t.categories.size(), 3u);
  EXPECT_EQ(t.categories[0].classes.size(), 7u);
  EXPECT_EQ(t.categories[1].classes.size(), 8u);
  EXPECT_EQ(t.categories[2].classes.size(), 12u);
  EXPECT_EQ(t.TotalClassCount(), 27u);

  const auto& movies = t.categories[0].classes;
  EXPECT_NE(std::find(movies.begin(), movies.end(), "Thriller"), movies.end());
  const std::vector<std::string> expected_movies = {"Action",  "Comedy",  "Drama", "Fantasy",
                                                    "Horror", "Romance", "Thriller"};
  EXPECT_EQ(movies, expected_movies);
  const std::vector<std::string> expected_music = {"Classical", "Country", "Electro", "Jazz",
                                                   "Pop",       "Rap",     "Rock",    "Techno"};
  EXPECT_EQ(t.categories[1].classes, expected_music);
}

TEST(Taxonomy, BuiltinFlightShape) {
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kFlight);
  ASSERT_EQ(t.categories.size(), 2u);
  EXPECT_EQ(t.categories[0].classes.size(), 11u);
  EXPECT_EQ(t.categories[1].classes.size(), 3u);
  EXPECT_EQ(t.TotalClassCount(), 14u);
}

TEST(Taxonomy, RejectsUnknownName) {
  EXPECT_THROW(MakeBuiltinTaxonomy("bogus"), std::invalid_argument);
}

TEST(GenerateDataset, DeterministicUnderSeed) {
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kFlight);
  const LabeledDataset a = GenerateDataset(t, 10, std::nullopt, 7);
  const LabeledDataset b = GenerateDataset(t, 10, std::nullopt, 7);
  ASSERT_EQ(a.profiles.size(), b.profiles.size());
  for (size_t i = 0; i < a.profiles.size(); ++i) {
    EXPECT_EQ(a.profiles[i], b.profiles[i]);
  }
  const LabeledDataset c = GenerateDataset(t, 10, std::nullopt, 8);
  bool any_diff = false;
  for (size_t i = 0; i < a.profiles.size(); ++i) any_diff |= !(a.profiles[i] == c.profiles[i]);
  EXPECT_TRUE(any_diff);
}

TEST(GenerateDataset, UniformFrequenciesConverge) {
  // Movie class frequency 1/7 within 0.01 at 10^5 samples (exact
  // multinomial expectation).
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  const LabeledDataset ds = GenerateDataset(t, 100000, std::nullopt, 3);
  std::vector<size_t> counts(7, 0);
  for (const auto& p : ds.profiles) counts[p.selections[0]]++;
  for (size_t c = 0; c < 7; ++c) {
    const double freq = static_cast<double>(counts[c]) / 100000.0;
    EXPECT_NEAR(freq, 1.0 / 7.0, 0.01) << "movie class " << c;
  }
}

TEST(GenerateDataset, WeightedFrequenciesMatchSupports) {
  // Movie weights proportional to the supports 8550/5693/5691/5751/5721/
  // 5690/2904 out of 40000; the generated Action share must land within
  // two points of 8550/40000.
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  ClassWeights weights(3);
  const std::vector<double> supports = {8550, 5693, 5691, 5751, 5721, 5690, 2904};
  for (double s : supports) weights[0].push_back(s / 40000.0);
  weights[1].assign(8, 1.0 / 8);
  weights[2].assign(12, 1.0 / 12);

  const LabeledDataset ds = GenerateDataset(t, 40000, weights, 1);
  size_t action = 0;
  for (const auto& p : ds.profiles) action += p.selections[0] == 0;
  const double freq = static_cast<double>(action) / 40000.0;
  EXPECT_NEAR(freq, 8550.0 / 40000.0, 0.02);
}

TEST(GenerateDataset, RejectsBadArgs) {
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kFlight);
  EXPECT_THROW(GenerateDataset(t, 0, std::nullopt, 1), std::invalid_argument);

  ClassWeights malformed(2);
  malformed[0].assign(11, 0.1);  // sums to 1.1
  malformed[1].assign(3, 1.0 / 3);
  EXPECT_THROW(GenerateDataset(t, 10, malformed, 1), std::invalid_argument);

  ClassWeights negative(2);
  negative[0].assign(11, 1.0 / 11);
  negative[1] = {1.5, -0.5, 0.0};
  EXPECT_THROW(GenerateDataset(t, 10, negative, 1), std::invalid_argument);
}

TEST(GenerateArchetypeDataset, MutationRateControlsAgreement) {
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  const auto archetypes = DefaultArchetypes(t, 4);
  const LabeledDataset ds = GenerateArchetypeDataset(t, 20000, archetypes, 0.1, 5);

  // Every profile should exactly match some archetype in most categories.
  size_t matches = 0, total = 0;
  for (const auto& p : ds.profiles) {
    size_t best = 0;
    for (const auto& a : archetypes) {
      size_t agree = 0;
      for (size_t j = 0; j < 3; ++j) agree += a.selections[j] == p.selections[j];
      best = std::max(best, agree);
    }
    matches += best;
    total += 3;
  }
  const double agreement = static_cast<double>(matches) / static_cast<double>(total);
  // Per category: 0.9 + 0.1/|classes| agreement with the source archetype.
  EXPECT_GT(agreement, 0.85);
  EXPECT_LT(agreement, 0.97);

  const LabeledDataset again = GenerateArchetypeDataset(t, 20000, archetypes, 0.1, 5);
  for (size_t i = 0; i < 100; ++i) EXPECT_EQ(ds.profiles[i], again.profiles[i]);
}

TEST(DefaultArchetypes, DistinctAndValid) {
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  const auto archetypes = DefaultArchetypes(t, 5);
  ASSERT_EQ(archetypes.size(), 5u);
  for (const auto& a : archetypes) ValidateProfile(Profile{a.selections}, t);
  for (size_t i = 0; i < archetypes.size(); ++i) {
    for (size_t j = i + 1; j < archetypes.size(); ++j) {
      EXPECT_NE(archetypes[i].selections, archetypes[j].selections);
    }
  }
}

TEST(DatasetCsv, RoundTripsBitExact) {
  const Taxonomy t = MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  const LabeledDataset ds = GenerateDataset(t, 500, std::nullopt, 11);

  std::stringstream first;
  WriteDatasetCsv(ds, first);
  const std::string text = first.str();

  std::stringstream parse_in(text);
  const LabeledDataset parsed = ReadDatasetCsv(parse_in);
  ASSERT_EQ(parsed.profiles.size(), ds.profiles.size());
  for (size_t i = 0; i < ds.profiles.size(); ++i) {
    EXPECT_EQ(parsed.profiles[i], ds.profiles[i]);
  }

  std::stringstream second;
  WriteDatasetCsv(parsed, second);
  EXPECT_EQ(second.str(), text);
}

}  // namespace
}  // namespace ldprec
