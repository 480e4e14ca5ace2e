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

#include "magpie/oracle.hpp"

#include <set>

#include "magpie/errors.hpp"

namespace magpie {

namespace {

// Number of multisets of size <= len drawn from n items, saturating at cap+1.
std::size_t multiset_count(std::size_t n, std::size_t len, std::size_t cap) {
  std::size_t total = 0;
  double term = 1.0;  // C(n + l - 1, l)
  for (std::size_t l = 0; l <= len; ++l) {
    if (l > 0) term = term * static_cast<double>(n + l - 1) / static_cast<double>(l);
    if (n == 0 && l > 0) break;
    total += static_cast<std::size_t>(term + 0.5);
    if (total > cap) return cap + 1;
  }
  return total;
}

}  // namespace

Optimum brute_force_optimum(Evaluator& evaluator, const EditFamilies& families,
                            std::size_t max_patch_len,
                            std::span<const std::string> instances, Rng& rng,
                            std::size_t cap) {
  EditSpace space(evaluator.model(), families, kDefaultSamplesPerNumericParam, rng);
  std::vector<Edit> edits;
  for (EditKind k : kAllEditKinds) {
    space.for_each(k, [&edits](const Edit& e) { edits.push_back(e); });
  }
  std::size_t count = multiset_count(edits.size(), max_patch_len, cap);
  if (count > cap) {
    throw SpaceTooLarge(std::to_string(edits.size()) + " edits up to length " +
                        std::to_string(max_patch_len) + " exceed the cap of " +
                        std::to_string(cap) + " patches");
  }

  Optimum best;
  best.report = evaluator.evaluate(Patch{}, instances);
  std::set<std::string> seen{evaluator.digest(Patch{}, instances)};
  best.candidates = 1;
  best.evaluated = 1;

  // Nondecreasing index tuples enumerate each multiset once.
  std::vector<std::size_t> idx;
  auto visit = [&](auto&& self, std::size_t from) -> void {
    if (idx.size() == max_patch_len) return;
    for (std::size_t i = from; i < edits.size(); ++i) {
      idx.push_back(i);
      Patch p;
      for (std::size_t j : idx) p.edits.push_back(edits[j]);
      ++best.candidates;
      if (seen.insert(evaluator.digest(p, instances)).second) {
        ++best.evaluated;
        FitnessReport r = evaluator.evaluate(p, instances);
        auto order = compare(r, best.report);
        if (order < 0 || (order == 0 && p.size() < best.patch.size())) {
          best.patch = p;
          best.report = std::move(r);
        }
      }
      self(self, i);
      idx.pop_back();
    }
  };
  visit(visit, 0);
  return best;
}

}  // namespace magpie
