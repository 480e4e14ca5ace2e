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

#include "magpie/patch.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>

#include "magpie/errors.hpp"

namespace magpie {

namespace {

constexpr std::string_view kKindNames[] = {
    "ParamSet",    "StmtDelete",  "StmtReplace",
    "StmtInsert",  "ConstantSet", "ConstantUpdate",
};

constexpr std::string_view kOperatorSymbols[] = {"+1", "-1",   "*2",
                                                 "/2", "*3/2", "*2/3"};

void append_quoted(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out.push_back(c);
    }
  }
  out.push_back('"');
}

// Cursor over one patch line.
class LineReader {
 public:
  LineReader(std::string_view line, std::size_t line_number)
      : line_(line), line_number_(line_number) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_number_, what);
  }

  void skip_spaces() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' ||
                                   line_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_spaces();
    return pos_ >= line_.size();
  }

  bool consume(char c) {
    skip_spaces();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string_view identifier() {
    skip_spaces();
    std::size_t start = pos_;
    while (pos_ < line_.size() &&
           (std::isalnum(static_cast<unsigned char>(line_[pos_])) ||
            line_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected edit kind");
    return line_.substr(start, pos_ - start);
  }

  std::string quoted() {
    skip_spaces();
    if (pos_ >= line_.size() || line_[pos_] != '"') fail("expected '\"'");
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= line_.size()) fail("unterminated string");
      char c = line_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= line_.size()) fail("unterminated escape");
        char e = line_[pos_++];
        if (e == '"' || e == '\\') {
          out.push_back(e);
        } else if (e == 'n') {
          out.push_back('\n');
        } else {
          fail(std::string("invalid escape '\\") + e + "'");
        }
      } else {
        out.push_back(c);
      }
    }
  }

  std::size_t line_number() const { return line_number_; }

 private:
  std::string_view line_;
  std::size_t line_number_;
  std::size_t pos_ = 0;
};

NodeRef parse_node_ref(std::string_view text, const LineReader& reader) {
  auto sep = text.rfind("::");
  if (sep == std::string_view::npos || sep == 0) {
    reader.fail("location '" + std::string(text) + "' lacks '<file>::'");
  }
  std::string_view rest = text.substr(sep + 2);
  auto open = rest.find('[');
  if (open == std::string_view::npos || open == 0 || rest.back() != ']') {
    reader.fail("location '" + std::string(text) + "' is not '<tag>[<n>]'");
  }
  std::string_view digits = rest.substr(open + 1, rest.size() - open - 2);
  std::size_t index = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (digits.empty() || ec != std::errc{} ||
      ptr != digits.data() + digits.size()) {
    reader.fail("bad node index in '" + std::string(text) + "'");
  }
  return NodeRef{std::string(text.substr(0, sep)),
                 std::string(rest.substr(0, open)), index};
}

InsertionPoint parse_insertion_point(std::string_view text,
                                     const LineReader& reader) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || text[colon - 1] == ':') {
    reader.fail("insertion point needs ':before' or ':after'");
  }
  std::string_view dir = text.substr(colon + 1);
  InsertionPoint point;
  if (dir == "before") {
    point.direction = InsertDirection::kBefore;
  } else if (dir == "after") {
    point.direction = InsertDirection::kAfter;
  } else {
    reader.fail("insertion direction must be 'before' or 'after'");
  }
  point.node = parse_node_ref(text.substr(0, colon), reader);
  return point;
}

NodeRef parse_constant_ref(std::string_view text, const LineReader& reader) {
  NodeRef ref = parse_node_ref(text, reader);
  if (ref.tag != kNumberTag) reader.fail("constant edits address number[<n>]");
  return ref;
}

}  // namespace

std::string_view symbol(UpdateOperator op) {
  return kOperatorSymbols[static_cast<std::size_t>(op)];
}

std::optional<UpdateOperator> parse_update_operator(std::string_view s) {
  for (std::size_t i = 0; i < std::size(kOperatorSymbols); ++i) {
    if (kOperatorSymbols[i] == s) return static_cast<UpdateOperator>(i);
  }
  return std::nullopt;
}

std::string apply_constant_update(std::string_view expr, UpdateOperator op) {
  std::string out = "((";
  out += expr;
  out += ')';
  out += symbol(op);
  out += ')';
  return out;
}

std::string_view name_of(EditKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EditKind> parse_edit_kind(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i) {
    if (kKindNames[i] == name) return static_cast<EditKind>(i);
  }
  return std::nullopt;
}

std::string to_string(const NodeRef& ref) {
  return ref.file + "::" + ref.tag + "[" + std::to_string(ref.index) + "]";
}

std::string to_string(const InsertionPoint& point) {
  return to_string(point.node) +
         (point.direction == InsertDirection::kBefore ? ":before" : ":after");
}

std::string serialize_edit(const Edit& edit) {
  std::string out(name_of(kind_of(edit)));
  out.push_back('(');
  std::visit(
      [&out](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ParamSet>) {
          append_quoted(out, e.param);
          out += ", ";
          append_quoted(out, e.value);
        } else if constexpr (std::is_same_v<T, StmtDelete>) {
          append_quoted(out, to_string(e.target));
        } else if constexpr (std::is_same_v<T, StmtReplace>) {
          append_quoted(out, to_string(e.target));
          out += ", ";
          append_quoted(out, to_string(e.ingredient));
        } else if constexpr (std::is_same_v<T, StmtInsert>) {
          append_quoted(out, to_string(e.point));
          out += ", ";
          append_quoted(out, to_string(e.ingredient));
        } else if constexpr (std::is_same_v<T, ConstantSet>) {
          append_quoted(out, to_string(e.target));
          out += ", ";
          append_quoted(out, e.literal);
        } else {
          append_quoted(out, to_string(e.target));
          out += ", ";
          append_quoted(out, symbol(e.op));
        }
      },
      edit);
  out.push_back(')');
  return out;
}

std::string serialize_patch(const Patch& patch) {
  std::string out;
  for (const Edit& edit : patch.edits) {
    out += serialize_edit(edit);
    out.push_back('\n');
  }
  return out;
}

Edit parse_edit(std::string_view line, std::size_t line_number) {
  LineReader reader(line, line_number);
  std::string_view name = reader.identifier();
  auto kind = parse_edit_kind(name);
  if (!kind) reader.fail("unknown edit kind '" + std::string(name) + "'");
  reader.expect('(');
  std::vector<std::string> args;
  if (!reader.consume(')')) {
    do {
      args.push_back(reader.quoted());
    } while (reader.consume(','));
    reader.expect(')');
  }
  if (!reader.at_end()) reader.fail("trailing characters after ')'");

  const std::size_t want = *kind == EditKind::kStmtDelete ? 1 : 2;
  if (args.size() != want) {
    reader.fail(std::string(name) + " takes " + std::to_string(want) +
                " argument(s), got " + std::to_string(args.size()));
  }
  switch (*kind) {
    case EditKind::kParamSet:
      if (args[0].empty()) reader.fail("empty parameter name");
      return ParamSet{args[0], args[1]};
    case EditKind::kStmtDelete:
      return StmtDelete{parse_node_ref(args[0], reader)};
    case EditKind::kStmtReplace:
      return StmtReplace{parse_node_ref(args[0], reader),
                         parse_node_ref(args[1], reader)};
    case EditKind::kStmtInsert:
      return StmtInsert{parse_insertion_point(args[0], reader),
                        parse_node_ref(args[1], reader)};
    case EditKind::kConstantSet:
      if (args[1].empty()) reader.fail("empty literal");
      return ConstantSet{parse_constant_ref(args[0], reader), args[1]};
    case EditKind::kConstantUpdate: {
      auto op = parse_update_operator(args[1]);
      if (!op) reader.fail("unknown update operator '" + args[1] + "'");
      return ConstantUpdate{parse_constant_ref(args[0], reader), *op};
    }
  }
  reader.fail("unreachable");
}

Patch parse_patch(std::string_view text) {
  Patch patch;
  std::size_t line_number = 0;
  while (!text.empty()) {
    ++line_number;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    patch.edits.push_back(parse_edit(line.substr(first), line_number));
  }
  return patch;
}

}  // namespace magpie
