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

#include "magpie/param_space.hpp"
#include "magpie/patch.hpp"
#include "magpie/xml_tree.hpp"

namespace magpie {

struct Scenario;

// One parsed target file with its addressable nodes.
struct SourceTree {
  std::string file_id;
  std::string original_xml;
  XmlDocument doc;
  // Preorder node ids per addressable tag: one entry per statement tag
  // present, plus kNumberTag for numerical literals.
  std::map<std::string, std::vector<NodeId>, std::less<>> by_tag;
  // Every statement node, preorder, as a reference.
  std::vector<NodeRef> statements;

  std::size_t statement_count() const { return statements.size(); }
  std::size_t number_count() const;
  std::optional<NodeId> resolve(std::string_view tag, std::size_t index) const;
};

// Immutable view of a scenario's editable material.
class TargetModel {
 public:
  TargetModel() = default;

  // `sources` pairs a file id with its srcML text. Throws XmlError.
  static TargetModel build(
      const std::vector<std::pair<std::string, std::string>>& sources,
      ParamSpace params, std::vector<std::string> stmt_tags);

  const std::vector<SourceTree>& files() const { return files_; }
  const SourceTree* file(std::string_view id) const;
  const ParamSpace& params() const { return params_; }
  const std::vector<std::string>& statement_tags() const { return stmt_tags_; }
  bool is_statement_tag(std::string_view tag) const;

  std::size_t statement_count() const;
  std::size_t number_count() const;

  // Original node id for a statement / constant reference, if it exists.
  std::optional<NodeId> resolve_statement(const NodeRef& ref) const;
  std::optional<NodeId> resolve_number(const NodeRef& ref) const;

 private:
  std::vector<SourceTree> files_;
  ParamSpace params_;
  std::vector<std::string> stmt_tags_;
};

// Reads target files and the parameter space named by the scenario.
// Throws XmlError, SpaceError or MissingFile.
TargetModel parse_target(const Scenario& scenario);

struct FileArtifact {
  std::string file_id;
  std::string xml;     // rendered srcML
  std::string source;  // srcML with markup stripped: what gets built
  bool modified = false;
};

struct VariantArtifacts {
  std::vector<FileArtifact> files;
  Assignment assignment;              // effective ParamSet values
  std::vector<std::size_t> noop_edits;  // indices into the patch
};

// Applies the edits in order to a private copy of the model. Edits whose
// target or ingredient was removed by an earlier edit are skipped and
// reported in noop_edits. Throws UnknownLocation for references that do
// not exist in the original model.
VariantArtifacts apply_patch(const TargetModel& model, const Patch& patch);

}  // namespace magpie
