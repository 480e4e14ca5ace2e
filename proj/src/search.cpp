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

#include "magpie/search.hpp"

#include <json.hpp>

#include "magpie/errors.hpp"
#include "magpie/json_io.hpp"

namespace magpie {

void SearchConfig::validate() const {
  if (families.empty()) throw PreconditionError("no edit families enabled");
  if (!(p_remove >= 0.0 && p_remove < 1.0)) {
    throw PreconditionError("p_remove must lie in [0, 1)");
  }
}

namespace {

bool family_available(const TargetModel& model, EditKind kind) {
  switch (kind) {
    case EditKind::kParamSet:
      return !model.params().empty();
    case EditKind::kStmtDelete:
    case EditKind::kStmtInsert:
      return model.statement_count() > 0;
    case EditKind::kStmtReplace:
      for (const auto& f : model.files()) {
        if (f.statement_count() >= 2) return true;
      }
      return false;
    case EditKind::kConstantSet:
    case EditKind::kConstantUpdate:
      return model.number_count() > 0;
  }
  return false;
}

}  // namespace

SearchTrace local_search(Evaluator& evaluator, std::span<const std::string> instances,
                         const SearchConfig& config, Rng& rng) {
  config.validate();
  const TargetModel& model = evaluator.model();
  std::vector<EditKind> kinds;
  for (EditKind k : config.families) {
    if (family_available(model, k)) kinds.push_back(k);
  }
  if (kinds.empty()) {
    throw EmptySpace("none of the families " + format_families(config.families) +
                     " has any edit on this target");
  }

  SearchTrace trace;
  trace.baseline = evaluator.evaluate(Patch{}, instances);
  if (!trace.baseline.clean()) {
    throw BaselineFailure("unmodified software is " +
                          std::string(name_of(trace.baseline.status)));
  }
  trace.best_report = trace.baseline;

  for (std::size_t step = 0; step < config.budget; ++step) {
    SearchStep rec;
    rec.step = step;
    Patch mutant = trace.best;
    if (!mutant.empty() && bernoulli(rng, config.p_remove)) {
      std::size_t idx = uniform_index(rng, mutant.size());
      rec.action = MutationAction::kRemove;
      rec.edit = mutant.edits[idx];
      mutant.edits.erase(mutant.edits.begin() + static_cast<std::ptrdiff_t>(idx));
    } else {
      EditKind kind = kinds[uniform_index(rng, kinds.size())];
      rec.action = MutationAction::kAppend;
      rec.edit = sample_random_edit(model, kind, rng);
      mutant.edits.push_back(rec.edit);
    }

    FitnessReport report = evaluator.evaluate(mutant, instances);
    ++trace.evaluations_charged;
    auto order = compare(report, trace.best_report);
    rec.accepted = config.accept_equal ? order <= 0 : order < 0;
    rec.status = report.status;
    rec.objectives = report.objectives;
    if (rec.accepted) {
      trace.best = std::move(mutant);
      trace.best_report = std::move(report);
    }
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

SearchTrace joint_search(Evaluator& evaluator, std::span<const std::string> instances,
                         const SearchConfig& config, Rng& rng) {
  // A single family degenerates to local_search with the same seed.
  return local_search(evaluator, instances, config, rng);
}

std::string trace_to_jsonl(const SearchTrace& trace) {
  using nlohmann::json;
  std::string out;
  out += json{{"baseline", {{"status", name_of(trace.baseline.status)},
                            {"objectives", trace.baseline.objectives}}}}
             .dump();
  out += '\n';
  for (const auto& s : trace.steps) {
    out += json{{"step", s.step},
                {"action", s.action == MutationAction::kAppend ? "append" : "remove"},
                {"edit", serialize_edit(s.edit)},
                {"status", name_of(s.status)},
                {"objectives", s.objectives},
                {"accepted", s.accepted}}
               .dump();
    out += '\n';
  }
  out += json{{"best", to_json(trace.best)},
              {"best_status", name_of(trace.best_report.status)},
              {"best_objectives", trace.best_report.objectives},
              {"evaluations", trace.evaluations_charged}}
             .dump();
  out += '\n';
  return out;
}

}  // namespace magpie
