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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magpie {

// How one or more objectives are measured from a run.
struct MeasurementSpec {
  enum class Source { kWallClock, kCounterCommand, kOutputRegex };

  Source source = Source::kWallClock;
  // Regex applied to the run's combined stdout/stderr. Each capture group
  // yields one objective. Unused for wall-clock.
  std::string pattern;

  std::size_t arity() const;
};

// Default srcML statement tags.
std::vector<std::string> default_statement_tags();

// A full run configuration, loaded from a flat key=value file. Relative
// paths are resolved against the file's directory.
struct Scenario {
  std::filesystem::path file;      // the scenario file itself, if any
  std::filesystem::path base_dir;  // directory relative paths resolve against

  std::vector<std::filesystem::path> target_files;  // srcML documents
  std::optional<std::filesystem::path> param_space_file;
  std::optional<std::filesystem::path> project_dir;  // copied into each work dir
  std::vector<std::string> stmt_tags = default_statement_tags();

  std::string compile_cmd;  // optional; may use {PARAMS}
  std::string run_cmd;      // must contain {INST}
  std::string counter_cmd;  // wrapper around run_cmd, must contain {CMD}
  double compile_timeout_s = 60.0;
  double run_timeout_s = 10.0;
  std::vector<MeasurementSpec> objectives{MeasurementSpec{}};

  std::optional<std::filesystem::path> train_instances_file;
  std::optional<std::filesystem::path> test_instances_file;

  std::filesystem::path work_dir;
  unsigned process_slots = 1;
  bool keep_failures = false;

  std::size_t budget = 1000;
  std::size_t joint_budget = 4000;
  std::size_t k = 10;
  std::uint64_t seed = 0;

  std::size_t objective_arity() const;

  // Identifier of a target file inside patches: its path relative to
  // base_dir with a trailing ".xml" removed ("core/Solver.cc").
  std::string file_id(const std::filesystem::path& target) const;

  // Text that determines how a variant is built and measured. Part of
  // every cache key.
  std::string fingerprint() const;

  // Checks cross-field invariants; throws ConfigError.
  void validate(bool param_space_empty) const;
};

// Throws ConfigError (naming the key) or MissingFile.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir);

// One instance per non-blank, non-comment line. Throws MissingFile.
std::vector<std::string> load_instances(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace magpie
