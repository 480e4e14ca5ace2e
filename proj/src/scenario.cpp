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

#include "magpie/scenario.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "magpie/errors.hpp"
#include "magpie/param_space.hpp"

namespace magpie {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(std::move(item));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(std::move(item));
  return out;
}

template <typename T>
T parse_number(const std::string& key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(key, "'" + std::string(v) + "' is not a valid number");
  }
  return out;
}

bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "'" + std::string(v) + "' is not a boolean");
}

MeasurementSpec parse_objective(std::string_view v) {
  MeasurementSpec spec;
  if (v == "wall_clock") return spec;
  if (v.starts_with("regex:")) {
    spec.source = MeasurementSpec::Source::kOutputRegex;
    spec.pattern = std::string(v.substr(6));
  } else if (v.starts_with("counter:")) {
    spec.source = MeasurementSpec::Source::kCounterCommand;
    spec.pattern = std::string(v.substr(8));
  } else {
    throw ConfigError("objectives", "expected wall_clock, regex:<pattern> or "
                                    "counter:<pattern>, got '" + std::string(v) + "'");
  }
  try {
    if (std::regex(spec.pattern).mark_count() == 0) {
      throw ConfigError("objectives", "pattern '" + spec.pattern +
                                          "' has no capture group");
    }
  } catch (const std::regex_error& e) {
    throw ConfigError("objectives", "invalid pattern '" + spec.pattern + "': " + e.what());
  }
  return spec;
}

void require_exists(const fs::path& p, const std::string& key) {
  if (!fs::exists(p)) throw MissingFile(key + ": no such file '" + p.string() + "'");
}

}  // namespace

std::size_t MeasurementSpec::arity() const {
  if (source == Source::kWallClock) return 1;
  return std::regex(pattern).mark_count();
}

std::vector<std::string> default_statement_tags() {
  return {"break", "continue", "decl_stmt", "do",     "expr_stmt", "for",
          "goto",  "if",       "return",    "switch", "while"};
}

std::size_t Scenario::objective_arity() const {
  std::size_t n = 0;
  for (const auto& o : objectives) n += o.arity();
  return n;
}

std::string Scenario::file_id(const fs::path& target) const {
  fs::path rel = target.lexically_relative(base_dir);
  if (rel.empty() || *rel.begin() == "..") rel = target.filename();
  std::string id = rel.generic_string();
  if (id.size() > 4 && id.ends_with(".xml")) id.resize(id.size() - 4);
  return id;
}

std::string Scenario::fingerprint() const {
  std::ostringstream out;
  out << "compile_cmd=" << compile_cmd << '\n'
      << "run_cmd=" << run_cmd << '\n'
      << "counter_cmd=" << counter_cmd << '\n'
      << "compile_timeout_s=" << compile_timeout_s << '\n'
      << "run_timeout_s=" << run_timeout_s << '\n'
      << "project_dir=" << (project_dir ? project_dir->string() : "") << '\n';
  for (const auto& o : objectives) {
    out << "objective=" << static_cast<int>(o.source) << ':' << o.pattern << '\n';
  }
  return out.str();
}

void Scenario::validate(bool param_space_empty) const {
  if (run_cmd.empty()) throw ConfigError("run_cmd", "is required");
  if (run_cmd.find("{INST}") == std::string::npos) {
    throw ConfigError("run_cmd", "must contain the {INST} placeholder");
  }
  if (!param_space_empty && run_cmd.find("{PARAMS}") == std::string::npos &&
      compile_cmd.find("{PARAMS}") == std::string::npos) {
    throw ConfigError("run_cmd",
                      "a parameter space is configured but neither run_cmd nor "
                      "compile_cmd contains {PARAMS}");
  }
  bool counter = false;
  for (const auto& o : objectives) {
    counter = counter || o.source == MeasurementSpec::Source::kCounterCommand;
  }
  if (counter && counter_cmd.find("{CMD}") == std::string::npos) {
    throw ConfigError("counter_cmd", "counter objectives need a wrapper containing {CMD}");
  }
  if (objectives.empty()) throw ConfigError("objectives", "at least one objective is required");
  if (compile_timeout_s <= 0) throw ConfigError("compile_timeout_s", "must be positive");
  if (run_timeout_s <= 0) throw ConfigError("run_timeout_s", "must be positive");
  if (process_slots == 0) throw ConfigError("process_slots", "must be at least 1");
  if (budget == 0) throw ConfigError("budget", "must be at least 1");
  if (joint_budget == 0) throw ConfigError("joint_budget", "must be at least 1");
  if (stmt_tags.empty()) throw ConfigError("stmt_tags", "must not be empty");
}

Scenario parse_scenario(std::string_view text, const fs::path& base_dir) {
  Scenario s;
  s.base_dir = base_dir;
  s.work_dir = base_dir / "magpie_work";
  std::set<std::string> seen;
  bool objectives_seen = false;
  auto resolve = [&base_dir](std::string_view v) {
    fs::path p(v);
    return (p.is_absolute() ? p : base_dir / p).lexically_normal();
  };

  std::size_t line_number = 0;
  while (!text.empty()) {
    ++line_number;
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number), "expected key=value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key != "objectives" && !seen.insert(key).second) {
      throw ConfigError(key, "given more than once");
    }

    if (key == "target_files") {
      for (const auto& f : split_list(value)) s.target_files.push_back(resolve(f));
    } else if (key == "param_space_file") {
      s.param_space_file = resolve(value);
    } else if (key == "project_dir") {
      s.project_dir = resolve(value);
    } else if (key == "stmt_tags") {
      s.stmt_tags = split_list(value);
    } else if (key == "compile_cmd") {
      s.compile_cmd = std::string(value);
    } else if (key == "run_cmd") {
      s.run_cmd = std::string(value);
    } else if (key == "counter_cmd") {
      s.counter_cmd = std::string(value);
    } else if (key == "compile_timeout_s") {
      s.compile_timeout_s = parse_number<double>(key, value);
    } else if (key == "run_timeout_s") {
      s.run_timeout_s = parse_number<double>(key, value);
    } else if (key == "objectives") {
      if (!objectives_seen) s.objectives.clear();
      objectives_seen = true;
      s.objectives.push_back(parse_objective(value));
    } else if (key == "train_instances_file") {
      s.train_instances_file = resolve(value);
    } else if (key == "test_instances_file") {
      s.test_instances_file = resolve(value);
    } else if (key == "work_dir") {
      s.work_dir = resolve(value);
    } else if (key == "process_slots") {
      s.process_slots = parse_number<unsigned>(key, value);
    } else if (key == "keep_failures") {
      s.keep_failures = parse_bool(key, value);
    } else if (key == "budget") {
      s.budget = parse_number<std::size_t>(key, value);
    } else if (key == "joint_budget") {
      s.joint_budget = parse_number<std::size_t>(key, value);
    } else if (key == "k") {
      s.k = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      s.seed = parse_number<std::uint64_t>(key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::string text = read_file(path);
  fs::path base = fs::absolute(path).parent_path().lexically_normal();
  Scenario s = parse_scenario(text, base);
  s.file = fs::absolute(path).lexically_normal();
  if (const char* env = std::getenv("MAGPIE_WORKDIR"); env && *env) {
    s.work_dir = fs::absolute(env);
  }

  for (const auto& t : s.target_files) require_exists(t, "target_files");
  if (s.project_dir) require_exists(*s.project_dir, "project_dir");
  if (s.train_instances_file) require_exists(*s.train_instances_file, "train_instances_file");
  if (s.test_instances_file) require_exists(*s.test_instances_file, "test_instances_file");
  bool empty_space = true;
  if (s.param_space_file) {
    require_exists(*s.param_space_file, "param_space_file");
    empty_space = ParamSpace::parse(read_file(*s.param_space_file)).empty();
  }
  s.validate(empty_space);
  return s;
}

std::vector<std::string> load_instances(const fs::path& path) {
  std::vector<std::string> out;
  std::string text = read_file(path);
  std::string_view rest = text;
  while (!rest.empty()) {
    auto nl = rest.find('\n');
    std::string_view line = trim(rest.substr(0, nl));
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line[0] != '#') out.emplace_back(line);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace magpie
