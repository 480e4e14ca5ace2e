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
#include <span>
#include <string>

#include "magpie/edit_space.hpp"
#include "magpie/evaluator.hpp"
#include "magpie/fitness.hpp"
#include "magpie/patch.hpp"
#include "magpie/random.hpp"

namespace magpie {

inline constexpr std::size_t kDefaultOracleCap = 200000;

struct Optimum {
  Patch patch;
  FitnessReport report;
  std::size_t candidates = 0;  // patches enumerated
  std::size_t evaluated = 0;   // distinct variants actually evaluated
};

// Exhaustive search over every multiset of at most `max_patch_len` edits
// from the families' edit space. Patches that render identical artifacts
// are evaluated once. Ties prefer fewer edits, then enumeration order.
// Throws SpaceTooLarge when more than `cap` patches would be enumerated.
Optimum brute_force_optimum(Evaluator& evaluator, const EditFamilies& families,
                            std::size_t max_patch_len,
                            std::span<const std::string> instances, Rng& rng,
                            std::size_t cap = kDefaultOracleCap);

}  // namespace magpie
