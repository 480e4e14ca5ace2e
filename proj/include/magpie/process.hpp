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

#include <filesystem>
#include <string>

namespace magpie {

struct ProcessResult {
  int exit_code = -1;       // valid when exited normally
  bool timed_out = false;
  bool signaled = false;
  std::string output;       // stdout and stderr, interleaved
  double wall_seconds = 0.0;

  bool ok() const { return !timed_out && !signaled && exit_code == 0; }
};

// Runs `command` through /bin/sh in its own process group with `cwd` as the
// working directory. On timeout the whole group is killed and reaped.
// Throws WorkspaceError if the process cannot be started.
ProcessResult run_shell(const std::string& command,
                        const std::filesystem::path& cwd, double timeout_s);

}  // namespace magpie
