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

#include "magpie/edit_space.hpp"

#include "magpie/errors.hpp"

namespace magpie {

EditFamilies parse_families(std::string_view list) {
  EditFamilies out;
  while (!list.empty()) {
    auto comma = list.find(',');
    std::string_view item = list.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto kind = parse_edit_kind(item);
      if (!kind) throw ConfigError("families", "unknown edit kind '" + std::string(item) + "'");
      out.insert(*kind);
    }
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError("families", "no edit kind given");
  return out;
}

std::string format_families(const EditFamilies& families) {
  std::string out;
  for (EditKind k : families) {
    if (!out.empty()) out.push_back(',');
    out += name_of(k);
  }
  return out;
}

EditSpace::EditSpace(const TargetModel& model, EditFamilies families,
                     std::size_t samples_per_numeric_param, Rng& rng)
    : model_(model), families_(std::move(families)) {
  if (!families_.contains(EditKind::kParamSet)) return;
  for (const auto& p : model.params().params()) {
    if (p.finite_domain_size()) {
      param_values_[p.name] = p.domain_values();
      continue;
    }
    auto& values = param_values_[p.name];
    for (std::size_t i = 0; i < samples_per_numeric_param; ++i) {
      values.push_back(sample_value(p, rng));
    }
  }
}

std::uint64_t EditSpace::count(EditKind kind) const {
  if (!families_.contains(kind)) return 0;
  std::uint64_t n = 0;
  switch (kind) {
    case EditKind::kParamSet:
      for (const auto& [name, values] : param_values_) n += values.size();
      return n;
    case EditKind::kStmtDelete:
      return model_.statement_count();
    case EditKind::kStmtReplace:
      for (const auto& f : model_.files()) {
        std::uint64_t s = f.statement_count();
        n += s == 0 ? 0 : s * (s - 1);
      }
      return n;
    case EditKind::kStmtInsert:
      for (const auto& f : model_.files()) {
        std::uint64_t s = f.statement_count();
        n += 2 * s * s;
      }
      return n;
    case EditKind::kConstantSet:
      return std::size(kConstantSetValues) * model_.number_count();
    case EditKind::kConstantUpdate:
      return std::size(kAllUpdateOperators) * model_.number_count();
  }
  return 0;
}

std::uint64_t EditSpace::total() const {
  std::uint64_t n = 0;
  for (EditKind k : kAllEditKinds) n += count(k);
  return n;
}

void EditSpace::for_each(EditKind kind,
                         const std::function<void(const Edit&)>& fn) const {
  if (!families_.contains(kind)) return;
  switch (kind) {
    case EditKind::kParamSet:
      for (const auto& p : model_.params().params()) {
        for (const auto& v : param_values_.at(p.name)) fn(ParamSet{p.name, v});
      }
      return;
    case EditKind::kStmtDelete:
      for (const auto& f : model_.files()) {
        for (const auto& s : f.statements) fn(StmtDelete{s});
      }
      return;
    case EditKind::kStmtReplace:
      for (const auto& f : model_.files()) {
        for (const auto& target : f.statements) {
          for (const auto& ingredient : f.statements) {
            if (target != ingredient) fn(StmtReplace{target, ingredient});
          }
        }
      }
      return;
    case EditKind::kStmtInsert:
      for (const auto& f : model_.files()) {
        for (const auto& target : f.statements) {
          for (InsertDirection d : {InsertDirection::kBefore, InsertDirection::kAfter}) {
            for (const auto& ingredient : f.statements) {
              fn(StmtInsert{InsertionPoint{target, d}, ingredient});
            }
          }
        }
      }
      return;
    case EditKind::kConstantSet:
      for (const auto& f : model_.files()) {
        for (std::size_t i = 0; i < f.number_count(); ++i) {
          for (auto v : kConstantSetValues) {
            fn(ConstantSet{NodeRef{f.file_id, std::string(kNumberTag), i}, std::string(v)});
          }
        }
      }
      return;
    case EditKind::kConstantUpdate:
      for (const auto& f : model_.files()) {
        for (std::size_t i = 0; i < f.number_count(); ++i) {
          for (auto op : kAllUpdateOperators) {
            fn(ConstantUpdate{NodeRef{f.file_id, std::string(kNumberTag), i}, op});
          }
        }
      }
      return;
  }
}

std::vector<Edit> EditSpace::edits(EditKind kind) const {
  std::vector<Edit> out;
  for_each(kind, [&out](const Edit& e) { out.push_back(e); });
  return out;
}

bool EditSpace::contains(const Edit& edit) const {
  if (!families_.contains(kind_of(edit))) return false;
  auto statement = [this](const NodeRef& r) {
    return model_.resolve_statement(r).has_value();
  };
  auto number = [this](const NodeRef& r) {
    return model_.resolve_number(r).has_value();
  };
  return std::visit(
      [&](const auto& e) -> bool {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ParamSet>) {
          const ParamSpec* p = model_.params().find(e.param);
          return p && p->contains(e.value);
        } else if constexpr (std::is_same_v<T, StmtDelete>) {
          return statement(e.target);
        } else if constexpr (std::is_same_v<T, StmtReplace>) {
          return statement(e.target) && statement(e.ingredient) &&
                 e.target.file == e.ingredient.file && e.target != e.ingredient;
        } else if constexpr (std::is_same_v<T, StmtInsert>) {
          return statement(e.point.node) && statement(e.ingredient) &&
                 e.point.node.file == e.ingredient.file;
        } else if constexpr (std::is_same_v<T, ConstantSet>) {
          if (!number(e.target)) return false;
          for (auto v : kConstantSetValues) {
            if (v == e.literal) return true;
          }
          return false;
        } else {
          return number(e.target);
        }
      },
      edit);
}

namespace {

// Statement references of every file, flattened, optionally skipping files
// with fewer than `min_per_file` statements.
std::vector<const NodeRef*> statement_locations(const TargetModel& model,
                                                std::size_t min_per_file) {
  std::vector<const NodeRef*> out;
  for (const auto& f : model.files()) {
    if (f.statement_count() < min_per_file) continue;
    for (const auto& s : f.statements) out.push_back(&s);
  }
  return out;
}

NodeRef random_number(const TargetModel& model, Rng& rng) {
  std::size_t pick = uniform_index(rng, model.number_count());
  for (const auto& f : model.files()) {
    if (pick < f.number_count()) {
      return NodeRef{f.file_id, std::string(kNumberTag), pick};
    }
    pick -= f.number_count();
  }
  throw EmptySpace("no numerical constants");
}

}  // namespace

Edit sample_random_edit(const TargetModel& model, EditKind kind, Rng& rng) {
  switch (kind) {
    case EditKind::kParamSet: {
      const auto& params = model.params().params();
      if (params.empty()) throw EmptySpace("no parameters to set");
      const ParamSpec& p = params[uniform_index(rng, params.size())];
      return ParamSet{p.name, sample_value(p, rng)};
    }
    case EditKind::kStmtDelete: {
      auto locations = statement_locations(model, 1);
      if (locations.empty()) throw EmptySpace("no statements to delete");
      return StmtDelete{*locations[uniform_index(rng, locations.size())]};
    }
    case EditKind::kStmtReplace: {
      auto locations = statement_locations(model, 2);
      if (locations.empty()) throw EmptySpace("no statement pairs to replace");
      const NodeRef& target = *locations[uniform_index(rng, locations.size())];
      const auto& pool = model.file(target.file)->statements;
      // Uniform over the file's other statements.
      std::size_t pick = uniform_index(rng, pool.size() - 1);
      if (pool[pick] == target) pick = pool.size() - 1;
      return StmtReplace{target, pool[pick]};
    }
    case EditKind::kStmtInsert: {
      auto locations = statement_locations(model, 1);
      if (locations.empty()) throw EmptySpace("no statements to insert around");
      const NodeRef& target = *locations[uniform_index(rng, locations.size())];
      InsertDirection dir =
          uniform_index(rng, 2) == 0 ? InsertDirection::kBefore : InsertDirection::kAfter;
      const auto& pool = model.file(target.file)->statements;
      return StmtInsert{InsertionPoint{target, dir}, pool[uniform_index(rng, pool.size())]};
    }
    case EditKind::kConstantSet: {
      if (model.number_count() == 0) throw EmptySpace("no numerical constants");
      NodeRef target = random_number(model, rng);
      return ConstantSet{
          target, std::string(kConstantSetValues[uniform_index(rng, std::size(kConstantSetValues))])};
    }
    case EditKind::kConstantUpdate: {
      if (model.number_count() == 0) throw EmptySpace("no numerical constants");
      NodeRef target = random_number(model, rng);
      return ConstantUpdate{
          target, kAllUpdateOperators[uniform_index(rng, std::size(kAllUpdateOperators))]};
    }
  }
  throw EmptySpace("unknown edit kind");
}

}  // namespace magpie
