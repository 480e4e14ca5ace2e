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

#include <algorithm>

#include "magpie/errors.hpp"
#include "magpie/param_space.hpp"
#include "magpie/target_model.hpp"
#include "test_support.hpp"

using namespace magpie;

namespace {

const char* kXml =
    "<unit><stmt>a;</stmt>\n<stmt>b = <number>10</number>;</stmt>\n"
    "<stmt>c = <number>0.5</number> + <literal type=\"number\">3</literal>;</stmt>\n</unit>";

TargetModel model(std::string params = "x {1,2,3} [1] -x={}\ny {on,off} [on] -y={}\n") {
  return TargetModel::build({{"t.c", kXml}}, ParamSpace::parse(params), {"stmt"});
}

NodeRef stmt(std::size_t i) { return {"t.c", "stmt", i}; }
NodeRef num(std::size_t i) { return {"t.c", "number", i}; }

}  // namespace

TEST_CASE("model indexes statements and numbers") {
  auto m = model();
  CHECK(m.statement_count() == 3);
  CHECK(m.number_count() == 3);
  CHECK(m.resolve_statement(stmt(2)));
  CHECK_FALSE(m.resolve_statement(stmt(3)));
  CHECK(m.resolve_number(num(2)));
  CHECK_FALSE(m.resolve_number({"other.c", "number", 0}));
}

TEST_CASE("empty patch reproduces the original") {
  auto m = model();
  auto v = apply_patch(m, Patch{});
  REQUIRE(v.files.size() == 1);
  CHECK(v.files[0].xml == kXml);
  CHECK_FALSE(v.files[0].modified);
  CHECK(v.assignment.empty());
  CHECK(v.noop_edits.empty());
  CHECK(v.files[0].source == "a;\nb = 10;\nc = 0.5 + 3;\n");
}

TEST_CASE("edits on deleted nodes are no-ops") {
  auto m = model();
  auto del = apply_patch(m, Patch{{StmtDelete{stmt(1)}}});
  auto both = apply_patch(m, Patch{{StmtDelete{stmt(1)}, StmtReplace{stmt(1), stmt(2)}}});
  CHECK(both.noop_edits == std::vector<std::size_t>{1});
  CHECK(both.files[0].xml == del.files[0].xml);
  CHECK(del.files[0].source == "a;\n\nc = 0.5 + 3;\n");

  // a deleted ingredient, and constants inside a deleted statement
  auto ing = apply_patch(m, Patch{{StmtDelete{stmt(2)}, StmtInsert{{stmt(0), InsertDirection::kAfter}, stmt(2)},
                                   ConstantSet{num(1), "7"}, ConstantUpdate{num(2), UpdateOperator::kPlusOne}}});
  CHECK(ing.noop_edits == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("no-op closure over random suffixes") {
  auto m = model();
  Rng rng(3);
  std::vector<Edit> after_delete = {
      StmtDelete{stmt(1)}, StmtReplace{stmt(1), stmt(0)}, StmtReplace{stmt(0), stmt(1)},
      StmtInsert{{stmt(1), InsertDirection::kBefore}, stmt(2)}, ConstantSet{num(0), "1"},
      ConstantUpdate{num(0), UpdateOperator::kHalve}};
  Patch base{{StmtDelete{stmt(1)}, ConstantUpdate{num(1), UpdateOperator::kTimesTwo}}};
  auto ref = apply_patch(m, base);
  for (int i = 0; i < 50; ++i) {
    Patch p = base;
    p.edits.push_back(after_delete[uniform_index(rng, after_delete.size())]);
    auto v = apply_patch(m, p);
    CHECK(v.files[0].xml == ref.files[0].xml);
    CHECK(v.noop_edits.back() == 2);
  }
}

TEST_CASE("constant updates stack") {
  auto m = model();
  auto v = apply_patch(m, Patch{{ConstantUpdate{num(0), UpdateOperator::kTimesTwo},
                                 ConstantUpdate{num(0), UpdateOperator::kPlusOne}}});
  // each update wraps the whole current expression
  CHECK(v.files[0].source == "a;\nb = ((((10)*2))+1);\nc = 0.5 + 3;\n");

  Rng rng(11);
  for (int round = 0; round < 30; ++round) {
    Patch p;
    std::string expected = "0.5";
    std::size_t n = 1 + uniform_index(rng, 5);
    for (std::size_t i = 0; i < n; ++i) {
      auto op = kAllUpdateOperators[uniform_index(rng, 6)];
      p.edits.push_back(ConstantUpdate{num(1), op});
      expected = apply_constant_update(expected, op);
    }
    CHECK(apply_patch(m, p).files[0].source == "a;\nb = 10;\nc = " + expected + " + 3;\n");
  }
}

TEST_CASE("constant set then update wraps the literal") {
  auto m = model();
  auto v = apply_patch(m, Patch{{ConstantSet{num(2), "-1"}, ConstantUpdate{num(2), UpdateOperator::kMinusOne}}});
  CHECK(v.files[0].source == "a;\nb = 10;\nc = 0.5 + ((-1)-1);\n");
  CHECK(v.files[0].modified);
}

TEST_CASE("ingredients come from the original tree") {
  auto m = model();
  auto v = apply_patch(m, Patch{{ConstantSet{num(0), "99"}, StmtReplace{stmt(0), stmt(1)}}});
  CHECK(v.files[0].source == "b = 10;\nb = 99;\nc = 0.5 + 3;\n");
  auto ins = apply_patch(m, Patch{{StmtInsert{{stmt(2), InsertDirection::kAfter}, stmt(0)},
                                   StmtInsert{{stmt(2), InsertDirection::kBefore}, stmt(0)}}});
  CHECK(ins.files[0].source == "a;\nb = 10;\na;c = 0.5 + 3;a;\n");
}

TEST_CASE("ParamSet: later edits win, different params commute") {
  auto m = model();
  auto v = apply_patch(m, Patch{{ParamSet{"x", "2"}, ParamSet{"x", "3"}}});
  CHECK(v.assignment.at("x") == "3");
  auto ab = apply_patch(m, Patch{{ParamSet{"x", "2"}, ParamSet{"y", "off"}}});
  auto ba = apply_patch(m, Patch{{ParamSet{"y", "off"}, ParamSet{"x", "2"}}});
  CHECK(ab.assignment == ba.assignment);
  CHECK(ab.files[0].xml == ba.files[0].xml);
}

TEST_CASE("references outside the original model raise UnknownLocation") {
  auto m = model();
  CHECK_THROWS_AS(apply_patch(m, Patch{{StmtDelete{stmt(3)}}}), UnknownLocation);
  CHECK_THROWS_AS(apply_patch(m, Patch{{StmtDelete{{"u.c", "stmt", 0}}}}), UnknownLocation);
  CHECK_THROWS_AS(apply_patch(m, Patch{{StmtDelete{{"t.c", "if", 0}}}}), UnknownLocation);
  CHECK_THROWS_AS(apply_patch(m, Patch{{ConstantSet{num(3), "1"}}}), UnknownLocation);
  CHECK_THROWS_AS(apply_patch(m, Patch{{StmtReplace{stmt(0), stmt(9)}}}), UnknownLocation);
  CHECK_THROWS_AS(apply_patch(m, Patch{{ParamSet{"nope", "1"}}}), UnknownLocation);
  // even after the same node was deleted, a bad index is still an error
  CHECK_THROWS_AS(apply_patch(m, Patch{{StmtDelete{stmt(0)}, StmtDelete{stmt(7)}}}), UnknownLocation);
}

TEST_CASE("cross-file ingredients are rejected") {
  auto m = TargetModel::build({{"a.c", "<u><stmt>x;</stmt></u>"}, {"b.c", "<u><stmt>y;</stmt></u>"}},
                              ParamSpace{}, {"stmt"});
  CHECK_THROWS_AS(apply_patch(m, Patch{{StmtReplace{{"a.c", "stmt", 0}, {"b.c", "stmt", 0}}}}),
                  UnknownLocation);
  auto v = apply_patch(m, Patch{{StmtDelete{{"b.c", "stmt", 0}}}});
  CHECK_FALSE(v.files[0].modified);
  CHECK(v.files[1].modified);
}

TEST_CASE("apply_patch is deterministic") {
  auto m = model();
  Patch p{{StmtInsert{{stmt(0), InsertDirection::kBefore}, stmt(2)}, ConstantUpdate{num(0), UpdateOperator::kHalve},
           ParamSet{"y", "off"}}};
  auto a = apply_patch(m, p);
  auto b = apply_patch(m, p);
  CHECK(a.files[0].xml == b.files[0].xml);
  CHECK(a.assignment == b.assignment);
}
