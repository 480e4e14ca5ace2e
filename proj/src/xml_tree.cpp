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

#include "magpie/xml_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>

#include "magpie/errors.hpp"

namespace magpie {

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '-' || c == '.';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view xml) : xml_(xml) {}

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1 + std::count(xml_.begin(), xml_.begin() + pos_, '\n');
    throw XmlError("xml line " + std::to_string(line) + ": " + what);
  }

  bool starts_with(std::string_view s) const {
    return xml_.substr(pos_).starts_with(s);
  }

  // Returns the text from the current position through `terminator`.
  std::string_view take_through(std::string_view terminator,
                                std::string_view what) {
    auto end = xml_.find(terminator, pos_);
    if (end == std::string_view::npos) fail("unterminated " + std::string(what));
    end += terminator.size();
    std::string_view out = xml_.substr(pos_, end - pos_);
    pos_ = end;
    return out;
  }

  std::string_view take_doctype() {
    std::size_t start = pos_;
    int bracket = 0;
    while (pos_ < xml_.size()) {
      char c = xml_[pos_++];
      if (c == '[') ++bracket;
      if (c == ']') --bracket;
      if (c == '>' && bracket <= 0) return xml_.substr(start, pos_ - start);
    }
    fail("unterminated doctype");
  }

  std::string name() {
    std::size_t start = pos_;
    if (pos_ >= xml_.size() || !is_name_start(xml_[pos_])) fail("expected name");
    while (pos_ < xml_.size() && is_name_char(xml_[pos_])) ++pos_;
    return std::string(xml_.substr(start, pos_ - start));
  }

  void skip_spaces() {
    while (pos_ < xml_.size() && is_space(xml_[pos_])) ++pos_;
  }

  std::string_view xml_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c != '&') {
      out.push_back(c);
      ++i;
      continue;
    }
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(c);
      ++i;
      continue;
    }
    std::string_view entity = text.substr(i + 1, semi - i - 1);
    bool decoded = true;
    if (entity == "lt") {
      out.push_back('<');
    } else if (entity == "gt") {
      out.push_back('>');
    } else if (entity == "amp") {
      out.push_back('&');
    } else if (entity == "quot") {
      out.push_back('"');
    } else if (entity == "apos") {
      out.push_back('\'');
    } else if (entity.size() > 1 && entity[0] == '#') {
      std::uint32_t cp = 0;
      int base = 10;
      std::string_view digits = entity.substr(1);
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits.remove_prefix(1);
      }
      auto [ptr, ec] = std::from_chars(digits.data(),
                                       digits.data() + digits.size(), cp, base);
      decoded = !digits.empty() && ec == std::errc{} &&
                ptr == digits.data() + digits.size() && cp <= 0x10FFFF;
      if (decoded) append_utf8(out, cp);
    } else {
      decoded = false;
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

XmlDocument XmlDocument::parse(std::string_view xml) {
  XmlDocument doc;
  doc.add(Node{NodeKind::kDocument, {}, {}, {}, {}, {}, kNoNode});
  Parser p(xml);
  std::vector<NodeId> stack{doc.root()};
  std::size_t top_level_elements = 0;

  auto leaf = [&](NodeKind kind, std::string_view text) {
    Node n;
    n.kind = kind;
    n.open = std::string(text);
    n.parent = stack.back();
    NodeId id = doc.add(std::move(n));
    doc.nodes_[stack.back()].children.push_back(id);
  };

  while (p.pos_ < xml.size()) {
    if (xml[p.pos_] != '<') {
      auto end = xml.find('<', p.pos_);
      if (end == std::string_view::npos) end = xml.size();
      std::string_view text = xml.substr(p.pos_, end - p.pos_);
      if (stack.size() == 1 &&
          !std::all_of(text.begin(), text.end(), is_space)) {
        p.fail("character data outside the root element");
      }
      leaf(NodeKind::kText, text);
      p.pos_ = end;
      continue;
    }
    if (p.starts_with("<?")) {
      leaf(NodeKind::kMarkup, p.take_through("?>", "processing instruction"));
    } else if (p.starts_with("<!--")) {
      leaf(NodeKind::kMarkup, p.take_through("-->", "comment"));
    } else if (p.starts_with("<![CDATA[")) {
      if (stack.size() == 1) p.fail("CDATA outside the root element");
      leaf(NodeKind::kCData, p.take_through("]]>", "CDATA section"));
    } else if (p.starts_with("<!")) {
      leaf(NodeKind::kMarkup, p.take_doctype());
    } else if (p.starts_with("</")) {
      std::size_t start = p.pos_;
      p.pos_ += 2;
      std::string name = p.name();
      p.skip_spaces();
      if (p.pos_ >= xml.size() || xml[p.pos_] != '>') p.fail("malformed end tag");
      ++p.pos_;
      if (stack.size() == 1) p.fail("unexpected end tag </" + name + ">");
      Node& open = doc.nodes_[stack.back()];
      if (open.name != name) {
        p.fail("end tag </" + name + "> does not match <" + open.name + ">");
      }
      open.close = std::string(xml.substr(start, p.pos_ - start));
      stack.pop_back();
    } else {
      std::size_t start = p.pos_;
      ++p.pos_;
      Node n;
      n.kind = NodeKind::kElement;
      n.name = p.name();
      bool self_closing = false;
      while (true) {
        std::size_t before = p.pos_;
        p.skip_spaces();
        if (p.pos_ >= xml.size()) p.fail("unterminated start tag <" + n.name);
        if (xml[p.pos_] == '>') {
          ++p.pos_;
          break;
        }
        if (p.starts_with("/>")) {
          p.pos_ += 2;
          self_closing = true;
          break;
        }
        if (before == p.pos_) p.fail("expected whitespace before attribute");
        std::string attr = p.name();
        p.skip_spaces();
        if (p.pos_ >= xml.size() || xml[p.pos_] != '=') p.fail("expected '='");
        ++p.pos_;
        p.skip_spaces();
        if (p.pos_ >= xml.size() || (xml[p.pos_] != '"' && xml[p.pos_] != '\'')) {
          p.fail("expected quoted attribute value");
        }
        char quote = xml[p.pos_++];
        auto end = xml.find(quote, p.pos_);
        if (end == std::string_view::npos) p.fail("unterminated attribute value");
        n.attributes.emplace_back(
            std::move(attr), decode_entities(xml.substr(p.pos_, end - p.pos_)));
        p.pos_ = end + 1;
      }
      if (stack.size() == 1 && ++top_level_elements > 1) {
        p.fail("more than one root element");
      }
      n.open = std::string(xml.substr(start, p.pos_ - start));
      n.parent = stack.back();
      NodeId id = doc.add(std::move(n));
      doc.nodes_[stack.back()].children.push_back(id);
      if (!self_closing) stack.push_back(id);
    }
  }
  if (stack.size() != 1) {
    p.fail("unclosed element <" + doc.nodes_[stack.back()].name + ">");
  }
  if (top_level_elements == 0) p.fail("no root element");
  return doc;
}

NodeId XmlDocument::add(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

std::vector<NodeId> XmlDocument::elements_preorder() const {
  std::vector<NodeId> out;
  std::vector<NodeId> todo{root()};
  while (!todo.empty()) {
    NodeId id = todo.back();
    todo.pop_back();
    if (nodes_[id].kind == NodeKind::kElement) out.push_back(id);
    const auto& kids = nodes_[id].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) todo.push_back(*it);
  }
  return out;
}

bool XmlDocument::attached(NodeId id) const {
  while (id != root()) {
    id = nodes_.at(id).parent;
    if (id == kNoNode) return false;
  }
  return true;
}

std::string_view XmlDocument::attribute(NodeId id, std::string_view name) const {
  for (const auto& [k, v] : nodes_.at(id).attributes) {
    if (k == name) return v;
  }
  return {};
}

void XmlDocument::render_xml_into(NodeId id, std::string& out) const {
  const Node& n = nodes_[id];
  out += n.open;
  for (NodeId c : n.children) render_xml_into(c, out);
  out += n.close;
}

std::string XmlDocument::render_xml() const {
  std::string out;
  render_xml_into(root(), out);
  return out;
}

void XmlDocument::render_source_into(NodeId id, std::string& out) const {
  const Node& n = nodes_[id];
  switch (n.kind) {
    case NodeKind::kText:
      out += decode_entities(n.open);
      return;
    case NodeKind::kCData:
      // strip "<![CDATA[" and "]]>"
      out += std::string_view(n.open).substr(9, n.open.size() - 12);
      return;
    case NodeKind::kMarkup:
      return;
    case NodeKind::kDocument:
    case NodeKind::kElement:
      for (NodeId c : n.children) render_source_into(c, out);
      return;
  }
}

std::string XmlDocument::render_source() const { return render_source(root()); }

std::string XmlDocument::render_source(NodeId id) const {
  std::string out;
  render_source_into(id, out);
  return out;
}

std::string XmlDocument::raw_text(NodeId id) const {
  const Node& n = nodes_.at(id);
  if (n.kind == NodeKind::kText || n.kind == NodeKind::kCData) return n.open;
  std::string out;
  for (NodeId c : n.children) out += raw_text(c);
  return out;
}

std::size_t XmlDocument::child_position(NodeId parent, NodeId child) const {
  const auto& kids = nodes_.at(parent).children;
  auto it = std::find(kids.begin(), kids.end(), child);
  return static_cast<std::size_t>(it - kids.begin());
}

void XmlDocument::detach(NodeId id) {
  NodeId parent = nodes_.at(id).parent;
  if (parent == kNoNode) return;
  auto& kids = nodes_[parent].children;
  kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(child_position(parent, id)));
  nodes_[id].parent = kNoNode;
}

NodeId XmlDocument::clone_from(const XmlDocument& from, NodeId id) {
  // Copy first: `from` may alias *this and add() may reallocate.
  Node copy = from.nodes_.at(id);
  std::vector<NodeId> source_children = std::move(copy.children);
  copy.children.clear();
  copy.parent = kNoNode;
  NodeId fresh = add(std::move(copy));
  for (NodeId c : source_children) {
    NodeId child = clone_from(from, c);
    nodes_[child].parent = fresh;
    nodes_[fresh].children.push_back(child);
  }
  return fresh;
}

void XmlDocument::replace(NodeId target, NodeId replacement) {
  NodeId parent = nodes_.at(target).parent;
  auto& kids = nodes_.at(parent).children;
  kids[child_position(parent, target)] = replacement;
  nodes_[replacement].parent = parent;
  nodes_[target].parent = kNoNode;
}

void XmlDocument::insert_before(NodeId anchor, NodeId fresh) {
  NodeId parent = nodes_.at(anchor).parent;
  auto& kids = nodes_.at(parent).children;
  kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(child_position(parent, anchor)),
              fresh);
  nodes_[fresh].parent = parent;
}

void XmlDocument::insert_after(NodeId anchor, NodeId fresh) {
  NodeId parent = nodes_.at(anchor).parent;
  auto& kids = nodes_.at(parent).children;
  kids.insert(
      kids.begin() + static_cast<std::ptrdiff_t>(child_position(parent, anchor)) + 1,
      fresh);
  nodes_[fresh].parent = parent;
}

void XmlDocument::set_text(NodeId element, std::string text) {
  Node& n = nodes_.at(element);
  for (NodeId c : n.children) nodes_[c].parent = kNoNode;
  n.children.clear();
  if (n.close.empty()) {
    // self-closing: "<number/>" -> "<number>" ... "</number>"
    auto slash = n.open.rfind('/');
    n.open.erase(slash, 1);
    n.close = "</" + n.name + ">";
  }
  Node leaf;
  leaf.kind = NodeKind::kText;
  for (char c : text) {
    switch (c) {
      case '<': leaf.open += "&lt;"; break;
      case '>': leaf.open += "&gt;"; break;
      case '&': leaf.open += "&amp;"; break;
      default: leaf.open.push_back(c);
    }
  }
  leaf.parent = element;
  NodeId id = add(std::move(leaf));
  nodes_[element].children.push_back(id);
}

}  // namespace magpie
