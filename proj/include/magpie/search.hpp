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
#include <span>
#include <string>
#include <vector>

#include "magpie/edit_space.hpp"
#include "magpie/evaluator.hpp"
#include "magpie/fitness.hpp"
#include "magpie/patch.hpp"
#include "magpie/random.hpp"

namespace magpie {

inline constexpr std::size_t kDefaultBudget = 1000;
inline constexpr std::size_t kDefaultJointBudget = 4000;

struct SearchConfig {
  EditFamilies families;
  std::size_t budget = kDefaultBudget;  // mutant evaluations
  std::uint64_t seed = 0;
  double p_remove = 0.5;   // chance of a removal step when best is non-empty
  bool accept_equal = true;

  // Throws PreconditionError.
  void validate() const;
};

enum class MutationAction { kAppend, kRemove };

struct SearchStep {
  std::size_t step = 0;
  MutationAction action = MutationAction::kAppend;
  Edit edit;  // appended or removed edit
  VariantStatus status = VariantStatus::kClean;
  std::vector<double> objectives;
  bool accepted = false;
};

struct SearchTrace {
  FitnessReport baseline;
  std::vector<SearchStep> steps;
  Patch best;
  FitnessReport best_report;
  std::size_t evaluations_charged = 0;
};

// First-improvement local search: starting from the empty patch, each step
// appends a random edit (kind uniform over the families, then uniform within
// the kind) or removes a random one, and keeps the mutant when it is no
// worse than the incumbent. The baseline evaluation is not charged.
// Throws BaselineFailure when the unmodified software is not CLEAN.
SearchTrace local_search(Evaluator& evaluator, std::span<const std::string> instances,
                         const SearchConfig& config, Rng& rng);

// The same search over several families at once; kinds are drawn uniformly
// regardless of how many edits each family holds.
SearchTrace joint_search(Evaluator& evaluator, std::span<const std::string> instances,
                         const SearchConfig& config, Rng& rng);

// Baseline line, one line per step, then a summary line. Contains no
// timing data, so equal seeds give equal bytes.
std::string trace_to_jsonl(const SearchTrace& trace);

}  // namespace magpie
