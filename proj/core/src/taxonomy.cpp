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

#include "ldprec/taxonomy.hpp"

#include <set>
#include <stdexcept>

namespace ldprec {

size_t Taxonomy::TotalClassCount() const {
  size_t n = 0;
  for (const auto& c : categories) n += c.classes.size();
  return n;
}

void Taxonomy::Validate() const {
  std::set<std::string> cat_names;
  for (const auto& c : categories) {
    if (!cat_names.insert(c.name).second) {
      throw std::invalid_argument("Taxonomy: duplicate category name " + c.name);
    }
    if (c.classes.size() < 2) {
      throw std::invalid_argument("Taxonomy: category " + c.name + " has < 2 classes");
    }
    std::set<std::string> class_names(c.classes.begin(), c.classes.end());
    if (class_names.size() != c.classes.size()) {
      throw std::invalid_argument("Taxonomy: duplicate class in category " + c.name);
    }
  }
}

namespace {
std::vector<std::string> NumberedNames(const std::string& prefix, size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (size_t i = 1; i <= count; ++i) {
    std::string num = std::to_string(i);
    if (num.size() < 2) num.insert(num.begin(), '0');
    names.push_back(prefix + num);
  }
  return names;
}
}  // namespace

Taxonomy MakeBuiltinTaxonomy(BuiltinTaxonomy which) {
  Taxonomy t;
  switch (which) {
    case BuiltinTaxonomy::kPreference:
      t.name = "preference";
      t.categories = {
          {"movies",
           {"Action", "Comedy", "Drama", "Fantasy", "Horror", "Romance", "Thriller"}},
          {"music",
           {"Classical", "Country", "Electro", "Jazz", "Pop", "Rap", "Rock", "Techno"}},
          {"sports", NumberedNames("Sport", 12)},
      };
      break;
    case BuiltinTaxonomy::kFlight:
      t.name = "flight";
      t.categories = {
          {"destination", NumberedNames("Dest", 11)},
          {"flight_class", {"Economy", "Business", "First"}},
      };
      break;
  }
  t.Validate();
  return t;
}

Taxonomy MakeBuiltinTaxonomy(const std::string& name) {
  if (name == "preference") return MakeBuiltinTaxonomy(BuiltinTaxonomy::kPreference);
  if (name == "flight") return MakeBuiltinTaxonomy(BuiltinTaxonomy::kFlight);
  throw std::invalid_argument("unknown builtin taxonomy: " + name);
}

void ValidateProfile(const Profile& profile, const Taxonomy& taxonomy) {
  if (profile.selections.size() != taxonomy.categories.size()) {
    throw std::invalid_argument("Profile: selection count != category count");
  }
  for (size_t i = 0; i < profile.selections.size(); ++i) {
    if (profile.selections[i] >= taxonomy.categories[i].classes.size()) {
      throw std::invalid_argument("Profile: class index out of range");
    }
  }
}

}  // namespace ldprec
