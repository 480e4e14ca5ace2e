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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magpie/random.hpp"

namespace magpie {

enum class ParamKind { kCategorical, kBoolean, kInteger, kFloat };
enum class Distribution { kUniform, kLogUniform };

// Integer ranges up to this size are enumerated value by value; larger ones
// are subsampled like floats.
inline constexpr std::size_t kMaxEnumeratedIntegerRange = 64;

// Mixture weight given to a parameter's special values when sampling.
inline constexpr double kDefaultSpecialWeight = 0.1;

// "child is active iff parent is active and parent's value is in values".
struct Condition {
  std::string parent;
  std::vector<std::string> values;
};

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::kCategorical;
  std::vector<std::string> values;  // categorical and boolean domains
  double lo = 0.0;                  // numeric bounds, inclusive
  double hi = 0.0;
  Distribution distribution = Distribution::kUniform;
  std::vector<std::string> special_values;
  double special_weight = kDefaultSpecialWeight;
  std::string default_value;
  std::string render_template;  // every "{}" becomes the value
  std::vector<Condition> conditions;

  bool numeric() const {
    return kind == ParamKind::kInteger || kind == ParamKind::kFloat;
  }
  // Number of values when the domain is enumerated exhaustively.
  std::optional<std::size_t> finite_domain_size() const;
  // All values of a finite domain, in domain order. Empty otherwise.
  std::vector<std::string> domain_values() const;
  bool contains(std::string_view value) const;
  // Normal form used for equality ("05" and "5" are the same integer).
  std::string canonical(std::string_view value) const;
  std::string instantiate(std::string_view value) const;
};

struct ForbiddenClause {
  std::vector<std::pair<std::string, std::string>> terms;
};

using Assignment = std::map<std::string, std::string>;

class ParamSpace {
 public:
  ParamSpace() = default;

  // Line format:
  //   name {v1,v2,...} [default] template
  //   name [lo,hi] [default] int|float uniform|log special{0,1,-1}[:w] template
  //   condition child | parent in {v1,...}
  //   forbidden {a=1, b=2}
  // Throws SpaceError on syntax or invariant violations.
  static ParamSpace parse(std::string_view text);

  // Checks every invariant; throws SpaceError.
  void validate() const;

  const std::vector<ParamSpec>& params() const { return params_; }
  const std::vector<ForbiddenClause>& forbidden() const { return forbidden_; }
  bool empty() const { return params_.empty(); }
  const ParamSpec* find(std::string_view name) const;

  void add(ParamSpec spec) { params_.push_back(std::move(spec)); }
  void add_forbidden(ForbiddenClause clause) {
    forbidden_.push_back(std::move(clause));
  }

 private:
  std::vector<ParamSpec> params_;
  std::vector<ForbiddenClause> forbidden_;
};

struct RenderedConfiguration {
  std::string text;          // space-separated instantiations of active params
  bool valid = true;         // false iff some forbidden clause holds
  Assignment effective;      // every parameter, defaults filled in, canonical
  std::vector<std::string> active;
};

// Throws UnknownParameter / OutOfDomainValue.
RenderedConfiguration render_configuration(const ParamSpace& space,
                                           const Assignment& assignment);

// Draws a value: with probability special_weight one of the special values,
// otherwise from the parameter's distribution.
std::string sample_value(const ParamSpec& spec, Rng& rng);

// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace magpie
