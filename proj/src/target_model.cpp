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

#include "magpie/target_model.hpp"

#include <algorithm>

#include "magpie/errors.hpp"
#include "magpie/scenario.hpp"

namespace magpie {

namespace {

bool is_number_node(const XmlDocument& doc, NodeId id) {
  const auto& n = doc.node(id);
  return n.name == kNumberTag ||
         (n.name == "literal" && doc.attribute(id, "type") == "number");
}

}  // namespace

std::size_t SourceTree::number_count() const {
  auto it = by_tag.find(kNumberTag);
  return it == by_tag.end() ? 0 : it->second.size();
}

std::optional<NodeId> SourceTree::resolve(std::string_view tag,
                                          std::size_t index) const {
  auto it = by_tag.find(tag);
  if (it == by_tag.end() || index >= it->second.size()) return std::nullopt;
  return it->second[index];
}

TargetModel TargetModel::build(
    const std::vector<std::pair<std::string, std::string>>& sources,
    ParamSpace params, std::vector<std::string> stmt_tags) {
  TargetModel model;
  model.params_ = std::move(params);
  model.stmt_tags_ = std::move(stmt_tags);
  for (const auto& [id, xml] : sources) {
    if (model.file(id)) throw XmlError("duplicate target file '" + id + "'");
    SourceTree tree;
    tree.file_id = id;
    tree.original_xml = xml;
    try {
      tree.doc = XmlDocument::parse(xml);
    } catch (const XmlError& e) {
      throw XmlError(id + ": " + e.what());
    }
    for (NodeId n : tree.doc.elements_preorder()) {
      const std::string& name = tree.doc.node(n).name;
      if (model.is_statement_tag(name)) {
        auto& ids = tree.by_tag[name];
        tree.statements.push_back(NodeRef{id, name, ids.size()});
        ids.push_back(n);
      }
      if (is_number_node(tree.doc, n)) {
        tree.by_tag[std::string(kNumberTag)].push_back(n);
      }
    }
    model.files_.push_back(std::move(tree));
  }
  return model;
}

const SourceTree* TargetModel::file(std::string_view id) const {
  for (const auto& f : files_) {
    if (f.file_id == id) return &f;
  }
  return nullptr;
}

bool TargetModel::is_statement_tag(std::string_view tag) const {
  return std::find(stmt_tags_.begin(), stmt_tags_.end(), tag) != stmt_tags_.end();
}

std::size_t TargetModel::statement_count() const {
  std::size_t n = 0;
  for (const auto& f : files_) n += f.statement_count();
  return n;
}

std::size_t TargetModel::number_count() const {
  std::size_t n = 0;
  for (const auto& f : files_) n += f.number_count();
  return n;
}

std::optional<NodeId> TargetModel::resolve_statement(const NodeRef& ref) const {
  if (!is_statement_tag(ref.tag)) return std::nullopt;
  const SourceTree* f = file(ref.file);
  return f ? f->resolve(ref.tag, ref.index) : std::nullopt;
}

std::optional<NodeId> TargetModel::resolve_number(const NodeRef& ref) const {
  if (ref.tag != kNumberTag) return std::nullopt;
  const SourceTree* f = file(ref.file);
  return f ? f->resolve(ref.tag, ref.index) : std::nullopt;
}

TargetModel parse_target(const Scenario& scenario) {
  std::vector<std::pair<std::string, std::string>> sources;
  for (const auto& path : scenario.target_files) {
    sources.emplace_back(scenario.file_id(path), read_file(path));
  }
  ParamSpace space;
  if (scenario.param_space_file) {
    space = ParamSpace::parse(read_file(*scenario.param_space_file));
  }
  return TargetModel::build(sources, std::move(space), scenario.stmt_tags);
}

namespace {

class PatchApplier {
 public:
  explicit PatchApplier(const TargetModel& model) : model_(model) {
    for (const auto& f : model.files()) work_.push_back(f.doc);
  }

  // Returns false when the edit had no effect because something it
  // references is gone.
  bool apply(const Edit& edit) {
    return std::visit([this](const auto& e) { return apply_one(e); }, edit);
  }

  VariantArtifacts finish(Assignment assignment, std::vector<std::size_t> noops) {
    VariantArtifacts out;
    out.assignment = std::move(assignment);
    out.noop_edits = std::move(noops);
    for (std::size_t i = 0; i < work_.size(); ++i) {
      const SourceTree& original = model_.files()[i];
      FileArtifact art;
      art.file_id = original.file_id;
      art.xml = work_[i].render_xml();
      art.source = work_[i].render_source();
      art.modified = art.xml != original.original_xml;
      out.files.push_back(std::move(art));
    }
    return out;
  }

  Assignment assignment;

 private:
  struct Located {
    std::size_t file;
    NodeId node;
  };

  std::size_t file_index(const NodeRef& ref) const {
    for (std::size_t i = 0; i < model_.files().size(); ++i) {
      if (model_.files()[i].file_id == ref.file) return i;
    }
    throw UnknownLocation("unknown file in '" + to_string(ref) + "'");
  }

  Located statement(const NodeRef& ref) const {
    auto id = model_.resolve_statement(ref);
    if (!id) throw UnknownLocation("no statement node '" + to_string(ref) + "'");
    return {file_index(ref), *id};
  }

  Located number(const NodeRef& ref) const {
    auto id = model_.resolve_number(ref);
    if (!id) throw UnknownLocation("no constant node '" + to_string(ref) + "'");
    return {file_index(ref), *id};
  }

  bool alive(const Located& at) const { return work_[at.file].attached(at.node); }

  bool apply_one(const ParamSet& e) {
    if (!model_.params().find(e.param)) {
      throw UnknownLocation("unknown parameter '" + e.param + "'");
    }
    assignment[e.param] = e.value;
    return true;
  }

  bool apply_one(const StmtDelete& e) {
    Located at = statement(e.target);
    if (!alive(at)) return false;
    work_[at.file].detach(at.node);
    return true;
  }

  bool apply_one(const StmtReplace& e) {
    Located at = statement(e.target);
    Located from = statement(e.ingredient);
    if (!alive(at) || !alive(from)) return false;
    if (from.file != at.file) {
      throw UnknownLocation("ingredient '" + to_string(e.ingredient) +
                            "' is not in the target's file");
    }
    XmlDocument& doc = work_[at.file];
    NodeId copy = doc.clone_from(model_.files()[from.file].doc, from.node);
    doc.replace(at.node, copy);
    return true;
  }

  bool apply_one(const StmtInsert& e) {
    Located at = statement(e.point.node);
    Located from = statement(e.ingredient);
    if (!alive(at) || !alive(from)) return false;
    if (from.file != at.file) {
      throw UnknownLocation("ingredient '" + to_string(e.ingredient) +
                            "' is not in the target's file");
    }
    XmlDocument& doc = work_[at.file];
    NodeId copy = doc.clone_from(model_.files()[from.file].doc, from.node);
    if (e.point.direction == InsertDirection::kBefore) {
      doc.insert_before(at.node, copy);
    } else {
      doc.insert_after(at.node, copy);
    }
    return true;
  }

  bool apply_one(const ConstantSet& e) {
    Located at = number(e.target);
    if (!alive(at)) return false;
    work_[at.file].set_text(at.node, e.literal);
    return true;
  }

  bool apply_one(const ConstantUpdate& e) {
    Located at = number(e.target);
    if (!alive(at)) return false;
    XmlDocument& doc = work_[at.file];
    doc.set_text(at.node, apply_constant_update(doc.render_source(at.node), e.op));
    return true;
  }

  const TargetModel& model_;
  std::vector<XmlDocument> work_;
};

}  // namespace

VariantArtifacts apply_patch(const TargetModel& model, const Patch& patch) {
  PatchApplier applier(model);
  std::vector<std::size_t> noops;
  for (std::size_t i = 0; i < patch.edits.size(); ++i) {
    if (!applier.apply(patch.edits[i])) noops.push_back(i);
  }
  return applier.finish(std::move(applier.assignment), std::move(noops));
}

}  // namespace magpie
