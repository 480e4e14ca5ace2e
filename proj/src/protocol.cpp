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

#include "magpie/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "magpie/errors.hpp"
#include "magpie/json_io.hpp"

namespace magpie {

FoldPlan make_fold_plan(std::span<const std::string> instances, std::size_t k, Rng& rng,
                        std::size_t max_training) {
  if (k < 2) throw FoldError("k must be at least 2, got " + std::to_string(k));
  if (k > instances.size()) {
    throw FoldError("k = " + std::to_string(k) + " exceeds the " +
                    std::to_string(instances.size()) + " training instances");
  }
  FoldPlan plan;
  plan.k = k;
  plan.shuffled.assign(instances.begin(), instances.end());
  std::shuffle(plan.shuffled.begin(), plan.shuffled.end(), rng);

  const std::size_t n = plan.shuffled.size();
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < k; ++i) {
    starts.push_back(starts.back() + n / k + (i < n % k ? 1 : 0));
  }
  for (std::size_t i = 0; i < k; ++i) {
    Fold fold;
    for (std::size_t j = 0; j < n; ++j) {
      if (j >= starts[i] && j < starts[i + 1]) {
        fold.members.push_back(plan.shuffled[j]);
      } else {
        fold.validation.push_back(plan.shuffled[j]);
      }
    }
    std::size_t take = std::min(max_training, fold.members.size());
    fold.training.assign(fold.members.begin(), fold.members.begin() + static_cast<std::ptrdiff_t>(take));
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

namespace {

Patch subsequence(const Patch& patch, const std::vector<bool>& keep) {
  Patch out;
  for (std::size_t i = 0; i < patch.size(); ++i) {
    if (keep[i]) out.edits.push_back(patch.edits[i]);
  }
  return out;
}

}  // namespace

Minimization minimize_patch_detailed(Evaluator& evaluator, const Patch& patch,
                                     std::span<const std::string> instances) {
  Minimization m;
  m.baseline = evaluator.evaluate(Patch{}, instances);
  if (!m.baseline.clean()) {
    throw BaselineFailure("unmodified software is " + std::string(name_of(m.baseline.status)) +
                          " on the validation instances");
  }
  m.report = m.baseline;
  if (patch.empty()) return m;

  const std::size_t n = patch.size();
  m.solo.resize(n);
  parallel_for(n, evaluator.scenario().process_slots, [&](std::size_t i) {
    m.solo[i] = SoloEvaluation{patch.edits[i],
                               evaluator.evaluate(Patch{{patch.edits[i]}}, instances)};
  });

  // Phase A: rank, then re-add best first.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare(m.solo[a].report, m.solo[b].report) < 0;
  });
  std::vector<bool> keep(n, false);
  FitnessReport rebuilt_report = m.baseline;
  for (std::size_t i : order) {
    keep[i] = true;
    FitnessReport r = evaluator.evaluate(subsequence(patch, keep), instances);
    if (compare(r, rebuilt_report) < 0) {
      rebuilt_report = std::move(r);
    } else {
      keep[i] = false;
    }
  }
  m.rebuilt = subsequence(patch, keep);

  FitnessReport full_report = evaluator.evaluate(patch, instances);
  Patch best = m.rebuilt;
  FitnessReport best_report = rebuilt_report;

  // Phase B: only when edit interactions made phase A fall short.
  if (compare(full_report, rebuilt_report) < 0) {
    Patch current = patch;
    FitnessReport current_report = full_report;
    bool removed = true;
    while (removed) {
      removed = false;
      std::size_t i = 0;
      while (i < current.size()) {
        Patch candidate = current;
        candidate.edits.erase(candidate.edits.begin() + static_cast<std::ptrdiff_t>(i));
        FitnessReport r = evaluator.evaluate(candidate, instances);
        if (compare(r, current_report) <= 0) {
          current = std::move(candidate);
          current_report = std::move(r);
          removed = true;
        } else {
          ++i;
        }
      }
    }
    auto order_ab = compare(current_report, best_report);
    if (order_ab < 0 || (order_ab == 0 && current.size() < best.size())) {
      best = current;
      best_report = current_report;
      m.chose_pruned = true;
    }
    m.pruned = std::move(current);
  }
  m.patch = std::move(best);
  m.report = std::move(best_report);
  return m;
}

Patch minimize_patch(Evaluator& evaluator, const Patch& patch,
                     std::span<const std::string> instances) {
  return minimize_patch_detailed(evaluator, patch, instances).patch;
}

Patch combine_patches(Evaluator& evaluator, std::span<const Patch> patches,
                      std::span<const std::string> instances) {
  if (patches.size() < 2) {
    throw PreconditionError("combining needs at least two patches, got " +
                            std::to_string(patches.size()));
  }
  Patch joined;
  for (const auto& p : patches) {
    joined.edits.insert(joined.edits.end(), p.edits.begin(), p.edits.end());
  }
  return minimize_patch(evaluator, joined, instances);
}

double improvement_percent(double baseline, double variant) {
  if (baseline == 0.0) throw ZeroBaseline("baseline objective is 0");
  double pct = (variant - baseline) / baseline * 100.0;
  double rounded = std::round(pct * 100.0) / 100.0;
  return rounded == 0.0 ? 0.0 : rounded;  // no "-0.00"
}

std::vector<double> report_improvement(const FitnessReport& baseline,
                                       const FitnessReport& variant) {
  if (!baseline.clean() || !variant.clean()) {
    throw PreconditionError("improvement needs two CLEAN reports");
  }
  if (baseline.objectives.size() != variant.objectives.size()) {
    throw ArityMismatch("reports differ in objective arity");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < baseline.objectives.size(); ++i) {
    out.push_back(improvement_percent(baseline.objectives[i], variant.objectives[i]));
  }
  return out;
}

std::vector<ImpactRow> rank_edit_impacts(Evaluator& evaluator, std::span<const Patch> patches,
                                         std::span<const std::string> instances,
                                         double threshold_percent) {
  if (patches.empty()) throw PreconditionError("no patches to rank");
  FitnessReport baseline = evaluator.evaluate(Patch{}, instances);
  if (!baseline.clean()) throw BaselineFailure("unmodified software is not CLEAN");

  std::map<std::string, ImpactRow> rows;  // keyed by serialized edit
  for (const auto& p : patches) {
    std::set<std::string> seen;
    for (const auto& e : p.edits) {
      std::string key = serialize_edit(e);
      if (!seen.insert(key).second) continue;
      auto [it, fresh] = rows.try_emplace(key);
      if (fresh) it->second.edit = e;
      ++it->second.occurrences;
    }
  }
  std::vector<ImpactRow> all;
  for (auto& [key, row] : rows) all.push_back(std::move(row));
  parallel_for(all.size(), evaluator.scenario().process_slots, [&](std::size_t i) {
    FitnessReport r = evaluator.evaluate(Patch{{all[i].edit}}, instances);
    all[i].status = r.status;
    if (r.clean()) all[i].delta_percent = report_improvement(baseline, r);
  });

  std::vector<ImpactRow> out;
  for (auto& row : all) {
    if (row.status == VariantStatus::kClean && !row.delta_percent.empty() &&
        row.delta_percent[0] <= -threshold_percent) {
      out.push_back(std::move(row));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ImpactRow& a, const ImpactRow& b) {
    if (a.occurrences != b.occurrences) return a.occurrences > b.occurrences;
    return a.delta_percent[0] < b.delta_percent[0];
  });
  return out;
}

namespace {

std::vector<double> ratio_to(const FitnessReport& baseline, const FitnessReport& variant,
                             std::size_t arity) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!variant.clean() || !baseline.clean()) return std::vector<double>(arity, kInf);
  std::vector<double> out;
  for (std::size_t i = 0; i < arity; ++i) {
    double b = baseline.objectives[i];
    double v = variant.objectives[i];
    out.push_back(b == 0.0 ? (v == 0.0 ? 1.0 : kInf) : v / b);
  }
  return out;
}

FitnessReport repeated_test(Evaluator& evaluator, const Patch& patch,
                            std::span<const std::string> test, std::size_t repeats,
                            std::optional<Stability>* stability) {
  if (repeats <= 1) return evaluator.evaluate(patch, test);
  std::vector<FitnessReport> runs;
  for (std::size_t r = 0; r < repeats; ++r) {
    runs.push_back(evaluator.evaluate(patch, test, /*use_cache=*/false));
    if (!runs.back().clean()) return runs.back();
  }
  FitnessReport out = runs.front();
  Stability s = measure_stability(runs);
  out.objectives = s.mean;
  if (stability) *stability = std::move(s);
  return out;
}

}  // namespace

CampaignResult run_campaign(Evaluator& evaluator, std::span<const std::string> training,
                            std::span<const std::string> test, const CampaignConfig& config,
                            Rng& rng) {
  if (training.empty() || test.empty()) {
    throw PreconditionError("campaign needs non-empty training and test instances");
  }
  std::set<std::string> train_set(training.begin(), training.end());
  for (const auto& t : test) {
    if (train_set.contains(t)) {
      throw PreconditionError("instance '" + t + "' is in both training and test sets");
    }
  }
  config.search.validate();

  CampaignResult result;
  result.plan = make_fold_plan(training, config.k, rng, config.max_training_per_fold);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < config.k; ++i) seeds.push_back(rng());

  const std::size_t arity = evaluator.scenario().objective_arity();
  for (std::size_t i = 0; i < result.plan.folds.size(); ++i) {
    FoldResult fr;
    fr.fold = result.plan.folds[i];
    Rng fold_rng(seeds[i]);
    fr.trace = local_search(evaluator, fr.fold.training, config.search, fold_rng);
    fr.minimized = minimize_patch(evaluator, fr.trace.best, fr.fold.validation);
    fr.validation_report = evaluator.evaluate(fr.minimized, fr.fold.validation);
    fr.validation_baseline = evaluator.evaluate(Patch{}, fr.fold.validation);
    fr.ratio = ratio_to(fr.validation_baseline, fr.validation_report, arity);
    result.folds.push_back(std::move(fr));
  }

  for (std::size_t i = 1; i < result.folds.size(); ++i) {
    const auto& cand = result.folds[i];
    const auto& best = result.folds[result.selected_fold];
    auto order = compare_objectives(cand.ratio, best.ratio);
    if (order < 0 || (order == 0 && cand.minimized.size() < best.minimized.size())) {
      result.selected_fold = i;
    }
  }
  result.selected = result.folds[result.selected_fold].minimized;
  result.baseline_test_report =
      repeated_test(evaluator, Patch{}, test, config.test_repeats, nullptr);
  result.test_report = repeated_test(evaluator, result.selected, test, config.test_repeats,
                                     &result.test_stability);
  if (result.baseline_test_report.clean() && result.test_report.clean()) {
    result.improvement_percent =
        report_improvement(result.baseline_test_report, result.test_report);
  }
  return result;
}

nlohmann::json to_json(const CampaignResult& result) {
  using nlohmann::json;
  json folds = json::array();
  for (const auto& f : result.folds) {
    json ratio = json::array();
    for (double r : f.ratio) ratio.push_back(std::isfinite(r) ? json(r) : json(nullptr));
    folds.push_back({{"training", f.fold.training},
                     {"validation_size", f.fold.validation.size()},
                     {"search_best", to_json(f.trace.best)},
                     {"search_best_objectives", f.trace.best_report.objectives},
                     {"evaluations", f.trace.evaluations_charged},
                     {"minimized", to_json(f.minimized)},
                     {"validation", to_json(f.validation_report)},
                     {"validation_baseline", to_json(f.validation_baseline)},
                     {"ratio", ratio}});
  }
  json out{{"k", result.plan.k},
           {"folds", folds},
           {"selected_fold", result.selected_fold},
           {"selected", to_json(result.selected)},
           {"test", to_json(result.test_report)},
           {"baseline_test", to_json(result.baseline_test_report)},
           {"improvement_percent", result.improvement_percent}};
  if (result.test_stability) {
    out["test_stability"] = {{"mean", result.test_stability->mean},
                             {"stddev", result.test_stability->stddev},
                             {"cov", result.test_stability->cov}};
  }
  return out;
}

}  // namespace magpie
