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

#ifndef LDPREC_DATASET_HPP_
#define LDPREC_DATASET_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ldprec/taxonomy.hpp"

namespace ldprec {

struct LabeledDataset {
  Taxonomy taxonomy;
  std::vector<Profile> profiles;
  uint64_t seed = 0;
};

// Per-category class weights; each inner vector must be nonnegative and sum
// to 1 over the classes of its category.
using ClassWeights = std::vector<std::vector<double>>;

// Draws `count` independent profiles.  Uniform per category unless weights
// are given.  Pure function of (taxonomy, count, weights, seed).
LabeledDataset GenerateDataset(const Taxonomy& taxonomy, size_t count,
                               const std::optional<ClassWeights>& class_weights,
                               uint64_t seed);

// A profile archetype: one class per category, the center of a user group.
struct Archetype {
  std::vector<size_t> selections;
};

// Draws profiles from a mixture of archetypes: each profile picks an
// archetype uniformly, then per category keeps the archetype's class with
// probability 1-mutation_rate and resamples uniformly otherwise.  Stand-in
// for clustered real user traces.
LabeledDataset GenerateArchetypeDataset(const Taxonomy& taxonomy, size_t count,
                                        const std::vector<Archetype>& archetypes,
                                        double mutation_rate, uint64_t seed);

// Deterministic well-spread archetypes for a taxonomy (class index of
// archetype a in category j is a*|classes_j|/count, i.e. evenly spaced).
std::vector<Archetype> DefaultArchetypes(const Taxonomy& taxonomy, size_t count);

// Newline-delimited export: one header line naming the taxonomy, then one
// profile per line as comma-separated class indices.  Bit-exact round-trip.
void WriteDatasetCsv(const LabeledDataset& dataset, std::ostream& out);
LabeledDataset ReadDatasetCsv(std::istream& in);

}  // namespace ldprec

#endif  // LDPREC_DATASET_HPP_
