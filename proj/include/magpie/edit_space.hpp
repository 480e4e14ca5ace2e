// Copyright 2026 The Magpie Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "magpie/patch.hpp"
#include "magpie/random.hpp"
#include "magpie/target_model.hpp"

namespace magpie {

// Literals tried by ConstantSet.
inline constexpr std::string_view kConstantSetValues[] = {"0", "1", "-1"};

inline constexpr std::size_t kDefaultSamplesPerNumericParam = 10;

using EditFamilies = std::set<EditKind>;

// Parses "ParamSet,StmtDelete". Throws ConfigError("families", ...).
EditFamilies parse_families(std::string_view list);
std::string format_families(const EditFamilies& families);

// The set of single edits available on a model, restricted to `families`.
// Parameters without a finite domain are represented by
// `samples_per_numeric_param` values drawn when the space is built.
class EditSpace {
 public:
  EditSpace(const TargetModel& model, EditFamilies families,
            std::size_t samples_per_numeric_param, Rng& rng);

  const EditFamilies& families() const { return families_; }

  // Closed-form size of one kind's space (0 for disabled kinds).
  std::uint64_t count(EditKind kind) const;
  std::uint64_t total() const;

  // Visits every edit of one kind in a fixed order.
  void for_each(EditKind kind, const std::function<void(const Edit&)>& fn) const;
  std::vector<Edit> edits(EditKind kind) const;

  // True when `edit` is a well-formed member of its kind's space. Numeric
  // ParamSet values count if they are anywhere in the domain, not only in
  // the drawn subsample.
  bool contains(const Edit& edit) const;

 private:
  const TargetModel& model_;
  EditFamilies families_;
  std::map<std::string, std::vector<std::string>> param_values_;
};

// Draws one edit of `kind`: location uniform over the kind's locations,
// ingredient uniform within the location's file. Throws EmptySpace.
Edit sample_random_edit(const TargetModel& model, EditKind kind, Rng& rng);

}  // namespace magpie
