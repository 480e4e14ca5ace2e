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

#include <json.hpp>

#include "magpie/fitness.hpp"
#include "magpie/patch.hpp"

namespace magpie {

nlohmann::json to_json(const FitnessReport& report);
// Throws Error on a malformed document.
FitnessReport report_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Patch& patch);  // array of edit lines

}  // namespace magpie
