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

#include "magpie/fitness.hpp"

#include <cmath>

#include "magpie/errors.hpp"

namespace magpie {

namespace {

constexpr std::string_view kStatusNames[] = {
    "CLEAN", "INVALID_CONFIG", "COMPILE_ERROR", "RUNTIME_ERROR", "TIMEOUT", "OUTPUT_ERROR",
};

}  // namespace

std::string_view name_of(VariantStatus status) {
  return kStatusNames[static_cast<std::size_t>(status)];
}

std::optional<VariantStatus> parse_variant_status(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kStatusNames); ++i) {
    if (kStatusNames[i] == name) return static_cast<VariantStatus>(i);
  }
  return std::nullopt;
}

std::weak_ordering compare_objectives(std::span<const double> a,
                                      std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ArityMismatch("objective arity " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return std::weak_ordering::less;
    if (b[i] < a[i]) return std::weak_ordering::greater;
  }
  return std::weak_ordering::equivalent;
}

std::weak_ordering compare(const FitnessReport& a, const FitnessReport& b) {
  if (a.clean() != b.clean()) {
    return a.clean() ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  if (!a.clean()) return std::weak_ordering::equivalent;
  return compare_objectives(a.objectives, b.objectives);
}

Stability measure_stability(std::span<const std::vector<double>> series) {
  if (series.size() < 2) throw PreconditionError("stability needs at least two repeats");
  const std::size_t arity = series.front().size();
  Stability out;
  for (std::size_t j = 0; j < arity; ++j) {
    double sum = 0;
    for (const auto& s : series) {
      if (s.size() != arity) throw ArityMismatch("repeats differ in objective arity");
      sum += s[j];
    }
    double mean = sum / static_cast<double>(series.size());
    double sq = 0;
    for (const auto& s : series) sq += (s[j] - mean) * (s[j] - mean);
    double stddev = std::sqrt(sq / static_cast<double>(series.size()));
    if (mean == 0.0) throw ZeroMean("objective " + std::to_string(j) + " has mean 0");
    out.mean.push_back(mean);
    out.stddev.push_back(stddev);
    out.cov.push_back(stddev / mean);
  }
  return out;
}

Stability measure_stability(std::span<const FitnessReport> reports) {
  std::vector<std::vector<double>> series;
  for (const auto& r : reports) {
    if (!r.clean()) {
      throw PreconditionError("stability of a non-CLEAN report (" +
                              std::string(name_of(r.status)) + ")");
    }
    series.push_back(r.objectives);
  }
  return measure_stability(series);
}

}  // namespace magpie
