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

// Command-line driver: one subcommand per stage of the improvement
// pipeline. Exit 0 on success, 1 on domain errors, 2 on usage errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "magpie/digest.hpp"
#include "magpie/edit_space.hpp"
#include "magpie/errors.hpp"
#include "magpie/evaluator.hpp"
#include "magpie/json_io.hpp"
#include "magpie/patch.hpp"
#include "magpie/protocol.hpp"
#include "magpie/scenario.hpp"
#include "magpie/search.hpp"
#include "magpie/target_model.hpp"

#ifndef MAGPIE_VERSION
#define MAGPIE_VERSION "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace magpie;

struct Common {
  std::string scenario;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned process_slots = 0;
  bool keep_failures = false;
  std::string cache;
};

// Everything a subcommand needs once the scenario is loaded.
struct Session {
  Scenario scenario;
  TargetModel model;
  std::unique_ptr<Evaluator> evaluator;
  std::ofstream eval_log;
  std::uint64_t seed = 0;
};

using Table = std::vector<std::vector<std::string>>;

void print_table(std::ostream& out, const Table& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line.append(width[i] - row[i].size(), ' ');
    }
    out << line << '\n';
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(const fs::path& path, const Table& rows) {
  std::ofstream out(path);
  if (!out) throw WorkspaceError("cannot write " + path.string());
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string fmt_percent(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v << '%';
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WorkspaceError("cannot write " + path.string());
  out << text;
}

Patch read_patch(const fs::path& path) {
  if (!fs::exists(path)) throw MissingFile("patch file not found: " + path.string());
  return parse_patch(read_file(path));
}

std::string now_utc() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void append_run_log(const Session& s, const std::string& command, const json& extra) {
  json entry = {{"time", now_utc()},
                {"command", command},
                {"version", MAGPIE_VERSION},
                {"seed", s.seed},
                {"scenario", s.scenario.file.string()},
                {"scenario_digest", sha256_hex(s.scenario.fingerprint())}};
  for (auto it = extra.begin(); it != extra.end(); ++it) entry[it.key()] = it.value();
  std::ofstream out(s.scenario.work_dir / "runs.jsonl", std::ios::app);
  if (out) out << entry.dump() << '\n';
}

std::unique_ptr<Session> open_session(const Common& c) {
  auto s = std::make_unique<Session>();
  s->scenario = load_scenario(c.scenario);
  if (c.process_slots) s->scenario.process_slots = c.process_slots;
  if (c.keep_failures) s->scenario.keep_failures = true;
  s->seed = c.seed_given ? c.seed : s->scenario.seed;
  s->model = parse_target(s->scenario);
  std::error_code ec;
  fs::create_directories(s->scenario.work_dir, ec);
  if (ec) throw WorkspaceError("cannot create work dir " + s->scenario.work_dir.string());
  auto cache = c.cache.empty() ? std::make_shared<EvaluationCache>()
                               : std::make_shared<EvaluationCache>(fs::path(c.cache));
  s->evaluator = std::make_unique<Evaluator>(s->model, s->scenario, cache);
  s->eval_log.open(s->scenario.work_dir / "evaluations.jsonl", std::ios::app);
  if (s->eval_log) s->evaluator->set_log(&s->eval_log);
  return s;
}

std::vector<std::string> instances_or(const std::string& given,
                                      const std::optional<fs::path>& fallback,
                                      const char* role) {
  if (!given.empty()) return load_instances(given);
  if (!fallback) throw ConfigError(role, "no instance list given and none in the scenario");
  return load_instances(*fallback);
}

void add_common(CLI::App* app, Common& c, bool seeded) {
  app->add_option("--scenario", c.scenario, "scenario file")->required();
  app->add_option("--process-slots", c.process_slots, "concurrent process limit")
      ->check(CLI::PositiveNumber);
  app->add_flag("--keep-failures", c.keep_failures, "keep work dirs of failed variants");
  app->add_option("--cache", c.cache, "persistent evaluation cache (JSON lines)");
  if (seeded)
    app->add_option("--seed", c.seed, "random seed")->each([&](const std::string&) {
      c.seed_given = true;
    });
}

Table report_table(const FitnessReport& baseline, const FitnessReport& variant) {
  Table rows{{"objective", "baseline", "variant", "improvement"}};
  auto pct = report_improvement(baseline, variant);
  for (std::size_t i = 0; i < pct.size(); ++i)
    rows.push_back({std::to_string(i), fmt(baseline.objectives[i]),
                    fmt(variant.objectives[i]), fmt_percent(pct[i])});
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magpie: edit-based improvement of configurations, flags and source"};
  app.set_version_flag("--version", MAGPIE_VERSION);
  app.require_subcommand(1);

  Common c;

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "count the edit space per family");
  add_common(enumerate, c, true);
  std::string families_text;
  std::size_t samples = kDefaultSamplesPerNumericParam;
  std::string csv_out;
  enumerate->add_option("--families", families_text, "comma-separated edit kinds");
  enumerate->add_option("--samples", samples, "draws per continuous parameter");
  enumerate->add_option("--csv", csv_out, "also write the table as CSV");

  // search
  auto* search = app.add_subcommand("search", "local search from the empty patch");
  add_common(search, c, true);
  std::optional<std::size_t> budget;
  std::string instances_file, out_file, trace_file;
  bool joint = false;
  search->add_option("--families", families_text, "comma-separated edit kinds")->required();
  search->add_option("--budget", budget, "mutant evaluations")->check(CLI::PositiveNumber);
  search->add_option("--instances", instances_file, "instance list (default: training)");
  search->add_option("--out", out_file, "write the best patch here");
  search->add_option("--trace", trace_file, "write the search trace (JSON lines)");
  search->add_flag("--joint", joint, "joint search over two or more families");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "evaluate one patch");
  add_common(evaluate, c, false);
  std::string patch_file;
  evaluate->add_option("--patch", patch_file, "patch file (default: empty patch)");
  evaluate->add_option("--instances", instances_file, "instance list (default: test)");
  evaluate->add_option("--out", out_file, "also write the report JSON here");

  // minify
  auto* minify = app.add_subcommand("minify", "reduce a patch to its useful edits");
  add_common(minify, c, false);
  minify->add_option("--patch", patch_file, "patch file")->required();
  minify->add_option("--instances", instances_file, "validation instances")->required();
  minify->add_option("--out", out_file, "write the minimized patch here");

  // combine
  auto* combine = app.add_subcommand("combine", "concatenate patches and minimize");
  add_common(combine, c, false);
  std::vector<std::string> patch_files;
  combine->add_option("patches", patch_files, "patch files")->required()->expected(2, -1);
  combine->add_option("--instances", instances_file, "validation instances (default: training)");
  combine->add_option("--out", out_file, "write the combined patch here");

  // campaign
  auto* campaign = app.add_subcommand("campaign", "k-fold train, validate and test");
  add_common(campaign, c, true);
  std::optional<std::size_t> k;
  std::size_t test_repeats = 1;
  campaign->add_option("--families", families_text, "comma-separated edit kinds")->required();
  campaign->add_option("--k", k, "number of folds");
  campaign->add_option("--budget", budget, "mutant evaluations per fold")
      ->check(CLI::PositiveNumber);
  campaign->add_option("--test-repeats", test_repeats, "uncached test measurements")
      ->check(CLI::PositiveNumber);
  campaign->add_option("--out", out_file, "write the campaign result JSON here");

  // report
  auto* report = app.add_subcommand("report", "improvement of one report over another");
  std::string baseline_file, variant_file;
  report->add_option("--baseline", baseline_file, "baseline report JSON")->required();
  report->add_option("--variant", variant_file, "variant report JSON")->required();
  report->add_option("--csv", csv_out, "also write the table as CSV");

  // impacts
  auto* impacts = app.add_subcommand("impacts", "rank edits by solo impact across patches");
  add_common(impacts, c, false);
  std::string patches_dir;
  double threshold = kDefaultImpactThreshold;
  impacts->add_option("--patches", patches_dir, "directory of patch files")->required();
  impacts->add_option("--instances", instances_file, "instances (default: test)");
  impacts->add_option("--threshold", threshold, "minimum improvement in percent");
  impacts->add_option("--csv", csv_out, "also write the table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (app.get_subcommands().empty()) std::cerr << app.help();
    return 2;
  }

  try {
    if (*report) {
      auto b = report_from_json(json::parse(read_file(baseline_file)));
      auto v = report_from_json(json::parse(read_file(variant_file)));
      auto rows = report_table(b, v);
      print_table(std::cout, rows);
      if (!csv_out.empty()) write_csv(csv_out, rows);
      return 0;
    }

    auto session = open_session(c);
    Session& s = *session;
    Evaluator& ev = *s.evaluator;

    if (*enumerate) {
      auto families = families_text.empty()
                          ? EditFamilies(std::begin(kAllEditKinds), std::end(kAllEditKinds))
                          : parse_families(families_text);
      Rng rng(s.seed);
      EditSpace space(s.model, families, samples, rng);
      Table rows{{"family", "count"}};
      for (auto kind : families) rows.push_back({std::string(name_of(kind)), std::to_string(space.count(kind))});
      rows.push_back({"total", std::to_string(space.total())});
      print_table(std::cout, rows);
      if (!csv_out.empty()) write_csv(csv_out, rows);
      append_run_log(s, "enumerate", json::object({{"families", format_families(families)}}));
      return 0;
    }

    if (*search) {
      SearchConfig cfg;
      cfg.families = parse_families(families_text);
      cfg.budget = budget.value_or(joint ? s.scenario.joint_budget : s.scenario.budget);
      cfg.seed = s.seed;
      auto inst = instances_or(instances_file, s.scenario.train_instances_file,
                               "train_instances_file");
      Rng rng(s.seed);
      auto trace = joint ? joint_search(ev, inst, cfg, rng) : local_search(ev, inst, cfg, rng);
      std::string patch_text = serialize_patch(trace.best);
      if (!out_file.empty()) write_text(out_file, patch_text);
      if (!trace_file.empty()) write_text(trace_file, trace_to_jsonl(trace));
      std::cout << patch_text;
      std::cout << "# status " << name_of(trace.best_report.status) << ", objectives";
      for (double o : trace.best_report.objectives) std::cout << ' ' << fmt(o);
      std::cout << ", evaluations " << trace.evaluations_charged << '\n';
      append_run_log(s, joint ? "search --joint" : "search",
                     json::object({{"families", format_families(cfg.families)},
                      {"budget", cfg.budget},
                      {"best", to_json(trace.best)},
                      {"launches", ev.process_launches()}}));
      return 0;
    }

    if (*evaluate) {
      Patch p = patch_file.empty() ? Patch{} : read_patch(patch_file);
      auto inst = instances_or(instances_file, s.scenario.test_instances_file,
                               "test_instances_file");
      auto r = ev.evaluate(p, inst);
      std::string doc = to_json(r).dump(2);
      std::cout << doc << '\n';
      if (!out_file.empty()) write_text(out_file, doc + "\n");
      append_run_log(s, "evaluate", json::object({{"patch", to_json(p)}, {"status", std::string(name_of(r.status))}}));
      return 0;
    }

    if (*minify) {
      Patch p = read_patch(patch_file);
      auto inst = load_instances(instances_file);
      auto m = minimize_patch_detailed(ev, p, inst);
      std::string text = serialize_patch(m.patch);
      if (!out_file.empty()) write_text(out_file, text);
      std::cout << text;
      append_run_log(s, "minify", json::object({{"input", to_json(p)},
                                   {"output", to_json(m.patch)},
                                   {"phase", m.chose_pruned ? "prune" : "rebuild"}}));
      return 0;
    }

    if (*combine) {
      std::vector<Patch> patches;
      for (const auto& f : patch_files) patches.push_back(read_patch(f));
      auto inst = instances_or(instances_file, s.scenario.train_instances_file,
                               "train_instances_file");
      Patch out = combine_patches(ev, patches, inst);
      std::string text = serialize_patch(out);
      if (!out_file.empty()) write_text(out_file, text);
      std::cout << text;
      append_run_log(s, "combine", json::object({{"inputs", patch_files}, {"output", to_json(out)}}));
      return 0;
    }

    if (*campaign) {
      CampaignConfig cfg;
      cfg.k = k.value_or(s.scenario.k);
      cfg.search.families = parse_families(families_text);
      cfg.search.budget = budget.value_or(s.scenario.budget);
      cfg.search.seed = s.seed;
      cfg.test_repeats = test_repeats;
      auto train = instances_or("", s.scenario.train_instances_file, "train_instances_file");
      auto test = instances_or("", s.scenario.test_instances_file, "test_instances_file");
      Rng rng(s.seed);
      auto result = run_campaign(ev, train, test, cfg, rng);
      json doc = to_json(result);
      if (!out_file.empty()) write_text(out_file, doc.dump(2) + "\n");

      Table rows{{"fold", "edits", "status", "ratio"}};
      for (std::size_t i = 0; i < result.folds.size(); ++i) {
        const auto& f = result.folds[i];
        std::string ratio;
        for (double r : f.ratio) ratio += (ratio.empty() ? "" : " ") + fmt(r);
        rows.push_back({std::to_string(i) + (i == result.selected_fold ? "*" : ""),
                        std::to_string(f.minimized.size()),
                        std::string(name_of(f.validation_report.status)), ratio});
      }
      print_table(std::cout, rows);
      std::cout << "\nselected patch:\n" << serialize_patch(result.selected);
      if (!result.improvement_percent.empty()) {
        std::cout << "test improvement:";
        for (double p : result.improvement_percent) std::cout << ' ' << fmt_percent(p);
        std::cout << '\n';
      } else {
        std::cout << "test status: " << name_of(result.test_report.status) << '\n';
      }
      append_run_log(s, "campaign", json::object({{"k", cfg.k},
                                     {"budget", cfg.search.budget},
                                     {"families", format_families(cfg.search.families)},
                                     {"selected", to_json(result.selected)}}));
      return 0;
    }

    if (*impacts) {
      std::vector<Patch> patches;
      std::vector<fs::path> files;
      if (!fs::is_directory(patches_dir))
        throw MissingFile("patch directory not found: " + patches_dir);
      for (const auto& entry : fs::directory_iterator(patches_dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) patches.push_back(read_patch(f));
      auto inst = instances_or(instances_file, s.scenario.test_instances_file,
                               "test_instances_file");
      auto rows_in = rank_edit_impacts(ev, patches, inst, threshold);
      Table rows{{"edit", "occurrences", "improvement"}};
      for (const auto& r : rows_in)
        rows.push_back({serialize_edit(r.edit), std::to_string(r.occurrences),
                        fmt_percent(r.delta_percent.at(0))});
      print_table(std::cout, rows);
      if (!csv_out.empty()) write_csv(csv_out, rows);
      append_run_log(s, "impacts", json::object({{"patches", files.size()}, {"rows", rows_in.size()}}));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "magpie: configuration error (" << e.key() << "): " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "magpie: parse error at line " << e.line() << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "magpie: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "magpie: malformed JSON: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "magpie: internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
