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

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ldprec/rng.hpp"

namespace ldprec {

namespace {

void ValidateWeights(const Taxonomy& taxonomy, const ClassWeights& weights) {
  if (weights.size() != taxonomy.categories.size()) {
    throw std::invalid_argument("class_weights: one vector per category required");
  }
  for (size_t j = 0; j < weights.size(); ++j) {
    const auto& w = weights[j];
    if (w.size() != taxonomy.categories[j].classes.size()) {
      throw std::invalid_argument("class_weights: wrong class count for category " +
                                  taxonomy.categories[j].name);
    }
    double sum = 0.0;
    for (double x : w) {
      if (x < 0.0) throw std::invalid_argument("class_weights: negative weight");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("class_weights: weights must sum to 1 per category");
    }
  }
}

size_t SampleIndex(const std::vector<double>& weights, Rng& rng) {
  const double u = rng.NextDouble();
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace

LabeledDataset GenerateDataset(const Taxonomy& taxonomy, size_t count,
                               const std::optional<ClassWeights>& class_weights,
                               uint64_t seed) {
  taxonomy.Validate();
  if (count == 0) throw std::invalid_argument("GenerateDataset: count must be >= 1");
  if (class_weights) ValidateWeights(taxonomy, *class_weights);

  LabeledDataset ds;
  ds.taxonomy = taxonomy;
  ds.seed = seed;
  ds.profiles.resize(count);

  RngFactory factory(seed);
  // One substream per profile index so generation is order-independent.
  for (size_t i = 0; i < count; ++i) {
    Rng rng = factory.Stream({0x6474 /* 'dt' */, i});
    Profile p;
    p.selections.resize(taxonomy.categories.size());
    for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
      if (class_weights) {
        p.selections[j] = SampleIndex((*class_weights)[j], rng);
      } else {
        p.selections[j] = rng.NextBelow(taxonomy.categories[j].classes.size());
      }
    }
    ds.profiles[i] = std::move(p);
  }
  return ds;
}

LabeledDataset GenerateArchetypeDataset(const Taxonomy& taxonomy, size_t count,
                                        const std::vector<Archetype>& archetypes,
                                        double mutation_rate, uint64_t seed) {
  taxonomy.Validate();
  if (count == 0) throw std::invalid_argument("GenerateArchetypeDataset: count must be >= 1");
  if (archetypes.empty()) {
    throw std::invalid_argument("GenerateArchetypeDataset: need >= 1 archetype");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw std::invalid_argument("GenerateArchetypeDataset: mutation_rate in [0,1]");
  }
  for (const auto& a : archetypes) {
    ValidateProfile(Profile{a.selections}, taxonomy);
  }

  LabeledDataset ds;
  ds.taxonomy = taxonomy;
  ds.seed = seed;
  ds.profiles.resize(count);

  RngFactory factory(seed);
  for (size_t i = 0; i < count; ++i) {
    Rng rng = factory.Stream({0x6172 /* 'ar' */, i});
    const auto& base = archetypes[rng.NextBelow(archetypes.size())];
    Profile p;
    p.selections.resize(taxonomy.categories.size());
    for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
      const size_t n_classes = taxonomy.categories[j].classes.size();
      if (rng.Bernoulli(mutation_rate)) {
        p.selections[j] = rng.NextBelow(n_classes);
      } else {
        p.selections[j] = base.selections[j];
      }
    }
    ds.profiles[i] = std::move(p);
  }
  return ds;
}

std::vector<Archetype> DefaultArchetypes(const Taxonomy& taxonomy, size_t count) {
  if (count == 0) throw std::invalid_argument("DefaultArchetypes: count must be >= 1");
  std::vector<Archetype> out(count);
  for (size_t a = 0; a < count; ++a) {
    out[a].selections.resize(taxonomy.categories.size());
    for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
      const size_t n_classes = taxonomy.categories[j].classes.size();
      out[a].selections[j] = (a * n_classes) / count;
    }
  }
  return out;
}

void WriteDatasetCsv(const LabeledDataset& dataset, std::ostream& out) {
  out << dataset.taxonomy.name << '\n';
  for (const auto& p : dataset.profiles) {
    for (size_t j = 0; j < p.selections.size(); ++j) {
      if (j) out << ',';
      out << p.selections[j];
    }
    out << '\n';
  }
}

LabeledDataset ReadDatasetCsv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("ReadDatasetCsv: missing header line");
  }
  LabeledDataset ds;
  ds.taxonomy = MakeBuiltinTaxonomy(header);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Profile p;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      p.selections.push_back(std::stoull(field));
    }
    ValidateProfile(p, ds.taxonomy);
    ds.profiles.push_back(std::move(p));
  }
  return ds;
}

}  // namespace ldprec
