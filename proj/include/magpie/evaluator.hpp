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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "magpie/fitness.hpp"
#include "magpie/param_space.hpp"
#include "magpie/patch.hpp"
#include "magpie/scenario.hpp"
#include "magpie/target_model.hpp"

namespace magpie {

// Memo of evaluation results keyed by artifact digest. Optionally backed by
// an append-only JSON-lines file. Safe for concurrent use; concurrent
// inserts of one key keep the last write.
class EvaluationCache {
 public:
  EvaluationCache() = default;
  // Loads `file` if present and appends every later insert to it.
  explicit EvaluationCache(const std::filesystem::path& file);

  std::optional<FitnessReport> lookup(const std::string& digest) const;
  void insert(const FitnessReport& report);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, FitnessReport> entries_;
  std::optional<std::ofstream> sink_;
};

// Turns (patch, instances) into a FitnessReport by building and running the
// variant as the scenario describes.
class Evaluator {
 public:
  Evaluator(const TargetModel& model, const Scenario& scenario,
            std::shared_ptr<EvaluationCache> cache = std::make_shared<EvaluationCache>());

  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  // Throws PreconditionError for an empty instance list, UnknownLocation /
  // OutOfDomainValue for patches that do not fit the model, and
  // WorkspaceError when the work directory cannot be prepared.
  // With use_cache=false the variant is always rebuilt and rerun (repeated
  // measurements); the fresh result still replaces the cache entry.
  FitnessReport evaluate(const Patch& patch, std::span<const std::string> instances,
                         bool use_cache = true);

  // Cache key of a patch on an instance set, without running anything.
  std::string digest(const Patch& patch, std::span<const std::string> instances) const;

  const TargetModel& model() const { return model_; }
  const Scenario& scenario() const { return scenario_; }
  EvaluationCache& cache() { return *cache_; }

  std::uint64_t process_launches() const { return launches_.load(); }
  std::uint64_t evaluations() const { return ordinal_.load(); }

  // One JSON object per evaluation is written here when set.
  void set_log(std::ostream* log) { log_ = log; }

 private:
  struct Prepared;
  Prepared prepare(const Patch& patch, std::span<const std::string> instances) const;
  FitnessReport run_variant(const Prepared& prepared,
                            std::span<const std::string> instances,
                            std::uint64_t ordinal);
  InstanceRecord run_instance(const std::string& instance, const std::string& params,
                              const std::filesystem::path& dir);
  void log(const Patch& patch, const FitnessReport& report, double wall);

  const TargetModel& model_;
  const Scenario& scenario_;
  std::shared_ptr<EvaluationCache> cache_;
  std::string fingerprint_;
  std::counting_semaphore<1024> slots_;
  std::atomic<std::uint64_t> launches_{0};
  std::atomic<std::uint64_t> ordinal_{0};
  std::ostream* log_ = nullptr;
  std::mutex log_mu_;
};

// Substitutes every occurrence of `hole` in `text`.
std::string substitute(std::string text, std::string_view hole, std::string_view value);

// Runs `fn(i)` for i in [0, n) on up to `workers` threads. The first
// exception thrown is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace magpie
