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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace magpie {

// Address of one node of an original source tree: the `index`-th element
// carrying `tag` in pre-order, inside file `file`. Constants use the
// virtual tag "number".
struct NodeRef {
  std::string file;
  std::string tag;
  std::size_t index = 0;

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

inline constexpr std::string_view kNumberTag = "number";

enum class InsertDirection { kBefore, kAfter };

struct InsertionPoint {
  NodeRef node;
  InsertDirection direction = InsertDirection::kBefore;

  friend auto operator<=>(const InsertionPoint&, const InsertionPoint&) = default;
};

enum class UpdateOperator {
  kPlusOne,
  kMinusOne,
  kTimesTwo,
  kHalve,
  kTimesThreeHalves,
  kTimesTwoThirds,
};

inline constexpr UpdateOperator kAllUpdateOperators[] = {
    UpdateOperator::kPlusOne,  UpdateOperator::kMinusOne,
    UpdateOperator::kTimesTwo, UpdateOperator::kHalve,
    UpdateOperator::kTimesThreeHalves, UpdateOperator::kTimesTwoThirds,
};

// "+1", "-1", "*2", "/2", "*3/2", "*2/3".
std::string_view symbol(UpdateOperator op);
std::optional<UpdateOperator> parse_update_operator(std::string_view symbol);

// Wraps `expr` so that updates stack: ("10", *2) -> "((10)*2)".
std::string apply_constant_update(std::string_view expr, UpdateOperator op);

// The six edit kinds. The ingredient shape of each kind is fixed by its
// struct, so an ill-shaped edit cannot be constructed.
struct ParamSet {
  std::string param;
  std::string value;
  friend auto operator<=>(const ParamSet&, const ParamSet&) = default;
};

struct StmtDelete {
  NodeRef target;
  friend auto operator<=>(const StmtDelete&, const StmtDelete&) = default;
};

struct StmtReplace {
  NodeRef target;
  NodeRef ingredient;
  friend auto operator<=>(const StmtReplace&, const StmtReplace&) = default;
};

struct StmtInsert {
  InsertionPoint point;
  NodeRef ingredient;
  friend auto operator<=>(const StmtInsert&, const StmtInsert&) = default;
};

struct ConstantSet {
  NodeRef target;
  std::string literal;
  friend auto operator<=>(const ConstantSet&, const ConstantSet&) = default;
};

struct ConstantUpdate {
  NodeRef target;
  UpdateOperator op = UpdateOperator::kPlusOne;
  friend auto operator<=>(const ConstantUpdate&, const ConstantUpdate&) = default;
};

using Edit = std::variant<ParamSet, StmtDelete, StmtReplace, StmtInsert,
                          ConstantSet, ConstantUpdate>;

// Order matches the variant alternatives.
enum class EditKind {
  kParamSet,
  kStmtDelete,
  kStmtReplace,
  kStmtInsert,
  kConstantSet,
  kConstantUpdate,
};

inline constexpr EditKind kAllEditKinds[] = {
    EditKind::kParamSet,    EditKind::kStmtDelete,  EditKind::kStmtReplace,
    EditKind::kStmtInsert,  EditKind::kConstantSet, EditKind::kConstantUpdate,
};

inline EditKind kind_of(const Edit& edit) {
  return static_cast<EditKind>(edit.index());
}

std::string_view name_of(EditKind kind);
std::optional<EditKind> parse_edit_kind(std::string_view name);

// A patch is an ordered edit sequence; the empty patch is the original
// software. Equality is structural.
struct Patch {
  std::vector<Edit> edits;

  bool empty() const { return edits.empty(); }
  std::size_t size() const { return edits.size(); }
  friend bool operator==(const Patch&, const Patch&) = default;
};

// Formats one reference as "<file>::<tag>[<n>]".
std::string to_string(const NodeRef& ref);
std::string to_string(const InsertionPoint& point);

// One line, no trailing newline.
std::string serialize_edit(const Edit& edit);

// One edit per line, each line newline-terminated. Empty patch -> "".
std::string serialize_patch(const Patch& patch);

// Throws ParseError (with 1-based line number) on malformed input.
// Blank lines and lines starting with '#' are skipped.
Patch parse_patch(std::string_view text);

// Parses a single line (no comments allowed).
Edit parse_edit(std::string_view line, std::size_t line_number = 1);

}  // namespace magpie
