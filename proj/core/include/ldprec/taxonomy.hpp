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

#ifndef LDPREC_TAXONOMY_HPP_
#define LDPREC_TAXONOMY_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace ldprec {

struct Category {
  std::string name;
  std::vector<std::string> classes;
};

// The category/class taxonomy.  Category names are unique, class names are
// unique within a category, and every category has at least two classes.
struct Taxonomy {
  std::string name;
  std::vector<Category> categories;

  // Total class count across categories (the Bloom sizing n).
  size_t TotalClassCount() const;
  void Validate() const;
};

enum class BuiltinTaxonomy { kPreference, kFlight };

// The two dataset shapes: `preference` has movies/music/sports with 7/8/12
// classes, `flight` has destination/flight-class with 11/3.
Taxonomy MakeBuiltinTaxonomy(BuiltinTaxonomy which);
Taxonomy MakeBuiltinTaxonomy(const std::string& name);

// One chosen class per category.
struct Profile {
  std::vector<size_t> selections;

  bool operator==(const Profile& other) const = default;
};

void ValidateProfile(const Profile& profile, const Taxonomy& taxonomy);

}  // namespace ldprec

#endif  // LDPREC_TAXONOMY_HPP_
