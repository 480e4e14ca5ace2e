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

#include "test_support.hpp"

#include <stdlib.h>

#include <fstream>
#include <functional>
#include <system_error>

#include "magpie/edit_space.hpp"
#include "magpie/errors.hpp"

namespace fs = std::filesystem;

namespace magpie::testing {

fs::path fixtures_dir() { return MAGPIE_FIXTURES_DIR; }
fs::path magpie_binary() { return MAGPIE_BIN; }

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "magpie-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw WorkspaceError("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, std::string_view text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

Bench::Bench(const fs::path& scenario_file) {
  scenario = load_scenario(scenario_file);
  scenario.work_dir = work.path();
  model = parse_target(scenario);
  evaluator = std::make_unique<Evaluator>(model, scenario);
  if (scenario.train_instances_file) train = load_instances(*scenario.train_instances_file);
  if (scenario.test_instances_file) test = load_instances(*scenario.test_instances_file);
}

std::unique_ptr<Bench> Bench::fixture(std::string_view name) {
  return std::make_unique<Bench>(fixtures_dir() / name / "scenario.cfg");
}

std::unique_ptr<Bench> bench_from(const TempDir& dir,
                                  const std::vector<std::pair<std::string, std::string>>& files) {
  for (const auto& [name, text] : files) write_file(dir / name, text);
  return std::make_unique<Bench>(dir / "scenario.cfg");
}

std::string random_text(Rng& rng) {
  static const std::string_view alphabet[] = {"a", "Z", "0", "9", "_", "-", "/", ".", " ",
                                              "\"", "\\", "\n", ",", "(", ")", ":",
                                              "[", "]", "\xc3\xa9", "\xe2\x82\xac"};
  std::string out;
  std::size_t len = 1 + uniform_index(rng, 12);
  for (std::size_t i = 0; i < len; ++i)
    out += alphabet[uniform_index(rng, std::size(alphabet))];
  return out;
}

namespace {

NodeRef random_ref(Rng& rng, std::string tag) {
  static const char* files[] = {"core/Solver.cc", "a.c", "src/x y.cpp"};
  return {files[uniform_index(rng, 3)], std::move(tag), uniform_index(rng, 50)};
}

NodeRef random_stmt(Rng& rng) {
  static const char* tags[] = {"expr_stmt", "decl_stmt", "if", "stmt", "return"};
  return random_ref(rng, tags[uniform_index(rng, 5)]);
}

}  // namespace

Edit random_edit(Rng& rng) {
  switch (uniform_index(rng, 6)) {
    case 0:
      return ParamSet{random_text(rng), random_text(rng)};
    case 1:
      return StmtDelete{random_stmt(rng)};
    case 2:
      return StmtReplace{random_stmt(rng), random_stmt(rng)};
    case 3:
      return StmtInsert{{random_stmt(rng), bernoulli(rng, 0.5) ? InsertDirection::kBefore
                                                                : InsertDirection::kAfter},
                        random_stmt(rng)};
    case 4:
      return ConstantSet{random_ref(rng, std::string(kNumberTag)), random_text(rng)};
    default:
      return ConstantUpdate{random_ref(rng, std::string(kNumberTag)),
                            kAllUpdateOperators[uniform_index(rng, 6)]};
  }
}

Patch random_patch(Rng& rng, std::size_t max_len) {
  Patch p;
  std::size_t len = uniform_index(rng, max_len + 1);
  for (std::size_t i = 0; i < len; ++i) p.edits.push_back(random_edit(rng));
  return p;
}

std::string random_tree(Rng& rng, std::size_t statements, std::size_t numbers) {
  // Statements are laid out first, some nested inside their predecessor,
  // then numbers are dropped into random statements.
  std::vector<std::string> body(statements);
  std::vector<std::size_t> parent(statements, statements);
  for (std::size_t i = 1; i < statements; ++i)
    if (bernoulli(rng, 0.3)) parent[i] = uniform_index(rng, i);
  std::vector<std::vector<std::string>> nums(statements + 1);
  for (std::size_t i = 0; i < numbers; ++i)
    nums[uniform_index(rng, statements + 1)].push_back(std::to_string(uniform_index(rng, 100)));

  std::function<std::string(std::size_t)> render = [&](std::size_t i) {
    std::string s = "<expr_stmt>x" + std::to_string(i) + " = ";
    for (const auto& n : nums[i]) s += "<number>" + n + "</number> + ";
    s += "1;";
    for (std::size_t j = i + 1; j < statements; ++j)
      if (parent[j] == i) s += "\n  " + render(j);
    return s + "</expr_stmt>";
  };
  std::string out = "<?xml version=\"1.0\"?>\n<unit language=\"C\">\n";
  for (std::size_t i = 0; i < statements; ++i)
    if (parent[i] == statements) out += render(i) + "\n";
  for (const auto& n : nums[statements]) out += "<decl>int k = <number>" + n + "</number>;</decl>\n";
  return out + "</unit>\n";
}

}  // namespace magpie::testing
