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

#include "magpie/json_io.hpp"

#include "magpie/errors.hpp"

namespace magpie {

using nlohmann::json;

json to_json(const FitnessReport& report) {
  json instances = json::array();
  for (const auto& r : report.instances) {
    instances.push_back({{"instance", r.instance},
                         {"status", name_of(r.status)},
                         {"objectives", r.objectives},
                         {"wall_time", r.wall_time}});
  }
  return {{"status", name_of(report.status)},
          {"objectives", report.objectives},
          {"instances", instances},
          {"cache_hit", report.cache_hit},
          {"eval", report.eval_ordinal},
          {"digest", report.digest}};
}

FitnessReport report_from_json(const json& doc) {
  try {
    FitnessReport r;
    auto status = parse_variant_status(doc.at("status").get<std::string>());
    if (!status) throw Error("unknown status '" + doc.at("status").get<std::string>() + "'");
    r.status = *status;
    r.objectives = doc.at("objectives").get<std::vector<double>>();
    if (doc.contains("instances")) {
      for (const auto& i : doc.at("instances")) {
        InstanceRecord rec;
        rec.instance = i.at("instance").get<std::string>();
        auto s = parse_variant_status(i.at("status").get<std::string>());
        if (!s) throw Error("unknown instance status");
        rec.status = *s;
        rec.objectives = i.at("objectives").get<std::vector<double>>();
        rec.wall_time = i.value("wall_time", 0.0);
        r.instances.push_back(std::move(rec));
      }
    }
    r.cache_hit = doc.value("cache_hit", false);
    r.eval_ordinal = doc.value("eval", std::uint64_t{0});
    r.digest = doc.value("digest", std::string{});
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed fitness report: ") + e.what());
  }
}

json to_json(const Patch& patch) {
  json out = json::array();
  for (const auto& e : patch.edits) out.push_back(serialize_edit(e));
  return out;
}

}  // namespace magpie
