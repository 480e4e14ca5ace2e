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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "magpie/evaluator.hpp"
#include "magpie/fitness.hpp"
#include "magpie/patch.hpp"
#include "magpie/random.hpp"
#include "magpie/search.hpp"

namespace magpie {

inline constexpr std::size_t kDefaultFolds = 10;
inline constexpr std::size_t kMaxTrainingPerFold = 10;
inline constexpr double kDefaultImpactThreshold = 1.0;  // percent

struct Fold {
  std::vector<std::string> members;     // this fold's share of the training set
  std::vector<std::string> training;    // first min(cap, |members|) members
  std::vector<std::string> validation;  // members of every other fold
};

struct FoldPlan {
  std::size_t k = kDefaultFolds;
  std::vector<std::string> shuffled;
  std::vector<Fold> folds;
};

// Shuffles `instances` with `rng` and splits them into k contiguous folds
// whose sizes differ by at most one. Throws FoldError when k < 2 or k
// exceeds the number of instances.
FoldPlan make_fold_plan(std::span<const std::string> instances, std::size_t k, Rng& rng,
                        std::size_t max_training = kMaxTrainingPerFold);

struct SoloEvaluation {
  Edit edit;
  FitnessReport report;
};

struct Minimization {
  Patch patch;
  FitnessReport report;
  FitnessReport baseline;
  std::vector<SoloEvaluation> solo;  // one per input edit, input order
  Patch rebuilt;                     // phase A outcome
  std::optional<Patch> pruned;       // phase B outcome, when it ran
  bool chose_pruned = false;
};

// Reduces a patch to the edits that pay for themselves on `instances`.
// Phase A evaluates every edit alone, ranks them, and re-adds them best
// first, keeping an edit only if it strictly improves the rebuilt patch.
// Kept edits stay in their input order, so the result is a subsequence of
// the input. If the full patch beats the rebuilt one, phase B starts from
// the full patch and drops any single edit whose removal does not worsen
// fitness until a sweep removes nothing. The better result wins; ties go to
// the shorter patch, then to phase A. Throws BaselineFailure.
Minimization minimize_patch_detailed(Evaluator& evaluator, const Patch& patch,
                                     std::span<const std::string> instances);
Patch minimize_patch(Evaluator& evaluator, const Patch& patch,
                     std::span<const std::string> instances);

// Concatenates the patches in order and minimizes the result. Throws
// PreconditionError for fewer than two patches.
Patch combine_patches(Evaluator& evaluator, std::span<const Patch> patches,
                      std::span<const std::string> instances);

// (variant - baseline) / baseline * 100, rounded to two decimals. Throws
// ZeroBaseline.
double improvement_percent(double baseline, double variant);
// Per objective. Both reports must be CLEAN with equal arity.
std::vector<double> report_improvement(const FitnessReport& baseline,
                                       const FitnessReport& variant);

struct ImpactRow {
  Edit edit;
  std::size_t occurrences = 0;  // patches containing the edit
  VariantStatus status = VariantStatus::kClean;
  std::vector<double> delta_percent;  // solo improvement vs. baseline
};

// Every distinct edit across `patches`, evaluated alone. Rows whose first
// objective improves by at least `threshold_percent` are kept, most
// frequent first.
std::vector<ImpactRow> rank_edit_impacts(Evaluator& evaluator, std::span<const Patch> patches,
                                         std::span<const std::string> instances,
                                         double threshold_percent = kDefaultImpactThreshold);

struct CampaignConfig {
  std::size_t k = kDefaultFolds;
  std::size_t max_training_per_fold = kMaxTrainingPerFold;
  SearchConfig search;
  std::size_t test_repeats = 1;
};

struct FoldResult {
  Fold fold;
  SearchTrace trace;
  Patch minimized;
  FitnessReport validation_report;
  FitnessReport validation_baseline;
  std::vector<double> ratio;  // per objective, variant / baseline
};

struct CampaignResult {
  FoldPlan plan;
  std::vector<FoldResult> folds;
  std::size_t selected_fold = 0;
  Patch selected;
  FitnessReport test_report;
  FitnessReport baseline_test_report;
  std::vector<double> improvement_percent;  // empty unless both CLEAN
  std::optional<Stability> test_stability;  // test_repeats >= 2
};

// k-fold train / validate / test. Throws FoldError, PreconditionError for
// empty or overlapping instance sets, and whatever search and evaluation
// raise.
CampaignResult run_campaign(Evaluator& evaluator, std::span<const std::string> training,
                            std::span<const std::string> test, const CampaignConfig& config,
                            Rng& rng);

nlohmann::json to_json(const CampaignResult& result);

}  // namespace magpie
