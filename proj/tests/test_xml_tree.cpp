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

#include <doctest.h>

#include <filesystem>

#include "magpie/errors.hpp"
#include "magpie/scenario.hpp"
#include "magpie/xml_tree.hpp"
#include "test_support.hpp"

using namespace magpie;

namespace {

const char* kSample =
    "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
    "<!-- leading comment -->\n"
    "<unit xmlns=\"http://www.srcML.org/srcML/src\" a='single \"q\"' revision=\"1.0\">\n"
    "  <expr_stmt><expr>x &lt; <literal type=\"number\">0x1F</literal> &amp;&amp; y</expr>;</expr_stmt>\n"
    "  <empty_stmt/>  <comment type=\"line\">// &#65;&#x42;</comment>\r\n"
    "  <![CDATA[raw <stuff> & more]]>\n"
    "  <?pi inside?>\n"
    "</unit>\n";

std::vector<NodeId> named(const XmlDocument& doc, std::string_view name) {
  std::vector<NodeId> out;
  for (NodeId id : doc.elements_preorder())
    if (doc.node(id).name == name) out.push_back(id);
  return out;
}

}  // namespace

TEST_CASE("unmodified documents render byte for byte") {
  auto doc = XmlDocument::parse(kSample);
  CHECK(doc.render_xml() == kSample);

  CHECK(XmlDocument::parse("<a/>").render_xml() == "<a/>");
  CHECK(XmlDocument::parse("<a></a>").render_xml() == "<a></a>");
  CHECK(XmlDocument::parse("<a >\n<b  x = \"1\" /></a >").render_xml() == "<a >\n<b  x = \"1\" /></a >");
}

TEST_CASE("every fixture renders losslessly") {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(testing::fixtures_dir())) {
    if (entry.path().extension() != ".xml") continue;
    std::string text = read_file(entry.path());
    CHECK(XmlDocument::parse(text).render_xml() == text);
    ++seen;
  }
  CHECK(seen >= 4);
}

TEST_CASE("source rendering strips tags and decodes entities") {
  auto doc = XmlDocument::parse(kSample);
  std::string src = doc.render_source();
  CHECK(src.find("x < 0x1F && y;") != std::string::npos);
  CHECK(src.find("// AB") != std::string::npos);
  CHECK(src.find("raw <stuff> & more") != std::string::npos);
  CHECK(src.find("leading comment") == std::string::npos);
  CHECK(src.find("pi inside") == std::string::npos);
}

TEST_CASE("attributes") {
  auto doc = XmlDocument::parse(kSample);
  auto unit = named(doc, "unit").at(0);
  CHECK(doc.attribute(unit, "a") == "single \"q\"");
  CHECK(doc.attribute(unit, "revision") == "1.0");
  CHECK(doc.attribute(unit, "missing") == "");
  CHECK(doc.attribute(named(doc, "literal").at(0), "type") == "number");
}

TEST_CASE("decode_entities") {
  CHECK(decode_entities("&lt;&gt;&amp;&quot;&apos;") == "<>&\"'");
  CHECK(decode_entities("&#233;&#xE9;") == "\xc3\xa9\xc3\xa9");
  CHECK(decode_entities("&bogus; & alone") == "&bogus; & alone");
}

TEST_CASE("malformed input raises XmlError") {
  CHECK_THROWS_AS(XmlDocument::parse("<a><b></a></b>"), XmlError);
  CHECK_THROWS_AS(XmlDocument::parse("<a></a><b></b>"), XmlError);
  CHECK_THROWS_AS(XmlDocument::parse("text <a></a>"), XmlError);
  CHECK_THROWS_AS(XmlDocument::parse("<a>"), XmlError);
  CHECK_THROWS_AS(XmlDocument::parse("<a x=\"1></a>"), XmlError);
  CHECK_THROWS_AS(XmlDocument::parse("<a><!-- open</a>"), XmlError);
  CHECK_THROWS_AS(XmlDocument::parse(""), XmlError);
  try {
    XmlDocument::parse("<a>\n\n<b></c></a>");
    FAIL("expected XmlError");
  } catch (const XmlError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("mutations") {
  auto original = XmlDocument::parse("<u><s>a;</s><s>b;</s><s>c;</s></u>");
  auto s = named(original, "s");

  SUBCASE("detach") {
    auto doc = original;
    doc.detach(s[1]);
    CHECK_FALSE(doc.attached(s[1]));
    CHECK(doc.attached(s[0]));
    CHECK(doc.render_xml() == "<u><s>a;</s><s>c;</s></u>");
  }
  SUBCASE("replace with a clone") {
    auto doc = original;
    NodeId copy = doc.clone_from(original, s[2]);
    doc.replace(s[0], copy);
    CHECK(doc.render_xml() == "<u><s>c;</s><s>b;</s><s>c;</s></u>");
    CHECK_FALSE(doc.attached(s[0]));
  }
  SUBCASE("insert") {
    auto doc = original;
    doc.insert_before(s[0], doc.clone_from(original, s[2]));
    doc.insert_after(s[2], doc.clone_from(original, s[0]));
    CHECK(doc.render_xml() == "<u><s>c;</s><s>a;</s><s>b;</s><s>c;</s><s>a;</s></u>");
  }
  SUBCASE("set_text escapes and opens self-closing elements") {
    auto doc = XmlDocument::parse("<u><n>1</n><m/></u>");
    doc.set_text(named(doc, "n")[0], "a<b&c");
    doc.set_text(named(doc, "m")[0], "2");
    CHECK(doc.render_xml() == "<u><n>a&lt;b&amp;c</n><m>2</m></u>");
    CHECK(doc.render_source() == "a<b&c2");
  }
  SUBCASE("a detached subtree stays detached when its ancestor is removed") {
    auto doc = XmlDocument::parse("<u><s>x<s>y</s></s></u>");
    auto ss = named(doc, "s");
    doc.detach(ss[0]);
    CHECK_FALSE(doc.attached(ss[1]));
  }
}
