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
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace magpie {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

// Lossless arena-backed XML tree. Every byte of the input is owned by some
// node (start/end tag text, character data, or markup such as comments and
// processing instructions), so render_xml() on an unmodified document
// returns the input verbatim. Node ids stay stable across edits; removed
// subtrees are detached rather than erased.
class XmlDocument {
 public:
  enum class NodeKind : std::uint8_t {
    kDocument,  // synthetic root, no text of its own
    kElement,
    kText,      // character data, entities still encoded
    kCData,     // "<![CDATA[...]]>" verbatim
    kMarkup,    // comment, PI, doctype: kept for xml, dropped from source
  };

  struct Node {
    NodeKind kind = NodeKind::kText;
    std::string name;                                       // elements only
    std::vector<std::pair<std::string, std::string>> attributes;
    std::string open;   // element start tag, or the raw text of leaf nodes
    std::string close;  // element end tag; empty when self-closing
    std::vector<NodeId> children;
    NodeId parent = kNoNode;
  };

  // Throws XmlError on malformed input.
  static XmlDocument parse(std::string_view xml);

  NodeId root() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }

  // Element ids in document pre-order.
  std::vector<NodeId> elements_preorder() const;

  // True when the node is still reachable from the document root.
  bool attached(NodeId id) const;

  // Attribute value or empty.
  std::string_view attribute(NodeId id, std::string_view name) const;

  std::string render_xml() const;
  // Character data with tags stripped, entities decoded, CDATA unwrapped.
  std::string render_source() const;
  std::string render_source(NodeId id) const;
  // Raw (still-encoded) concatenated character data below `id`.
  std::string raw_text(NodeId id) const;

  // Mutations. All take attached nodes; callers check attached() first.
  void detach(NodeId id);
  // Deep-copies `id` out of `from` (which may be *this) and returns the new,
  // detached root of the copy.
  NodeId clone_from(const XmlDocument& from, NodeId id);
  void replace(NodeId target, NodeId replacement);
  void insert_before(NodeId anchor, NodeId fresh);
  void insert_after(NodeId anchor, NodeId fresh);
  // Replaces all children of an element with one text node holding the
  // escaped form of `text`.
  void set_text(NodeId element, std::string text);

 private:
  NodeId add(Node node);
  std::size_t child_position(NodeId parent, NodeId child) const;
  void render_xml_into(NodeId id, std::string& out) const;
  void render_source_into(NodeId id, std::string& out) const;

  std::vector<Node> nodes_;
};

// Decodes the five predefined entities and numeric character references.
// Unknown entities are left as written.
std::string decode_entities(std::string_view text);

}  // namespace magpie
