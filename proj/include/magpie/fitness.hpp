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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace magpie {

enum class VariantStatus {
  kClean,
  kInvalidConfig,
  kCompileError,
  kRuntimeError,
  kTimeout,
  kOutputError,
};

std::string_view name_of(VariantStatus status);  // "CLEAN", "TIMEOUT", ...
std::optional<VariantStatus> parse_variant_status(std::string_view name);

struct InstanceRecord {
  std::string instance;
  VariantStatus status = VariantStatus::kClean;
  std::vector<double> objectives;
  double wall_time = 0.0;
};

// Only CLEAN reports carry objectives (lower is better, lexicographic).
struct FitnessReport {
  VariantStatus status = VariantStatus::kClean;
  std::vector<double> objectives;
  std::vector<InstanceRecord> instances;
  bool cache_hit = false;
  std::uint64_t eval_ordinal = 0;
  std::string digest;

  bool clean() const { return status == VariantStatus::kClean; }
};

// less: `a` is better. CLEAN beats every non-CLEAN report; non-CLEAN
// reports tie. Throws ArityMismatch for CLEAN reports of different arity.
std::weak_ordering compare(const FitnessReport& a, const FitnessReport& b);
std::weak_ordering compare_objectives(std::span<const double> a,
                                      std::span<const double> b);

struct Stability {
  std::vector<double> mean;
  std::vector<double> stddev;  // population
  std::vector<double> cov;     // stddev / mean
};

// Per-objective statistics of repeated measurements. Requires at least two
// series of equal arity; throws ZeroMean when an objective averages 0.
Stability measure_stability(std::span<const std::vector<double>> series);
Stability measure_stability(std::span<const FitnessReport> reports);

}  // namespace magpie
