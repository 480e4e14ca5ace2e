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

// Acceptance suite: one PASS/FAIL line per criterion, each with its
// tolerance and time limit fixed below. Exits nonzero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "magpie/edit_space.hpp"
#include "magpie/errors.hpp"
#include "magpie/fitness.hpp"
#include "magpie/oracle.hpp"
#include "magpie/patch.hpp"
#include "magpie/protocol.hpp"
#include "magpie/search.hpp"
#include "magpie/xml_tree.hpp"
#include "test_support.hpp"

using namespace magpie;
using testing::Bench;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string join(const std::vector<std::string>& parts, const char* sep = " ") {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

std::string num(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

FitnessReport clean_report(double v) {
  FitnessReport r;
  r.objectives = {v};
  return r;
}

// 1. Improvement percentages from printed raw values.
Outcome report_arithmetic() {
  constexpr double kTolerance = 0.01;  // percentage points
  struct Row {
    double baseline, variant, expected;
  };
  const Row rows[] = {{8560025063208.7, 7806500120218, -8.80},
                      {84336965193275, 7806500120218, -90.74},
                      {13884363297634.4, 12202547786121, -12.11}};
  bool ok = true;
  std::vector<std::string> got;
  for (const auto& r : rows) {
    double p = report_improvement(clean_report(r.baseline), clean_report(r.variant)).at(0);
    ok &= std::abs(p - r.expected) <= kTolerance;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", p);
    got.push_back(buf);
  }
  return {ok, join(got) + " (tolerance 0.01 pp)"};
}

// 2. Coefficient of variation for mean 12370, stddev 361.
Outcome cov_arithmetic() {
  constexpr double kExpected = 0.0292, kTolerance = 0.0001;
  std::vector<std::vector<double>> series{{12370.0 - 361.0}, {12370.0 + 361.0}};
  auto s = measure_stability(series);
  bool ok = std::abs(s.mean[0] - 12370) < 1e-9 && std::abs(s.stddev[0] - 361) < 1e-9 &&
            std::abs(s.cov[0] - kExpected) <= kTolerance;
  return {ok, "CoV " + num(s.cov[0], 6) + " (expected 0.0292 +- 0.0001)"};
}

// 3. Closed-form counts against exhaustive iteration on random trees.
Outcome space_counts() {
  constexpr int kTrees = 50;
  Rng rng(3);
  int matched = 0;
  std::string first_miss;
  for (int t = 0; t < kTrees; ++t) {
    std::size_t s_req = uniform_index(rng, 9), c_req = uniform_index(rng, 6);
    std::string xml = testing::random_tree(rng, s_req, c_req);
    // finite parameter domains of random sizes
    std::string params;
    std::uint64_t domain_sum = 0;
    std::size_t nparams = uniform_index(rng, 4);
    for (std::size_t p = 0; p < nparams; ++p) {
      std::size_t size = 1 + uniform_index(rng, 6);
      std::vector<std::string> values;
      for (std::size_t v = 0; v < size; ++v) values.push_back("v" + std::to_string(v));
      params += "p" + std::to_string(p) + " {" + join(values, ",") + "} [v0]\n";
      domain_sum += size;
    }
    auto model = TargetModel::build({{"t.c", xml}}, ParamSpace::parse(params), default_statement_tags());
    EditSpace space(model, EditFamilies(std::begin(kAllEditKinds), std::end(kAllEditKinds)), 10, rng);
    const std::uint64_t S = model.statement_count(), C = model.number_count();
    const std::uint64_t formula[] = {domain_sum, S, S * (S ? S - 1 : 0), 2 * S * S, 3 * C, 6 * C};
    bool ok = S == s_req && C == c_req;
    for (auto kind : kAllEditKinds) {
      std::uint64_t n = 0;
      space.for_each(kind, [&](const Edit&) { ++n; });
      ok &= n == space.count(kind) && n == formula[static_cast<int>(kind)];
    }
    if (ok) {
      ++matched;
    } else if (first_miss.empty()) {
      first_miss = " first mismatch at tree " + std::to_string(t);
    }
  }
  return {matched == kTrees, std::to_string(matched) + "/50 trees exact" + first_miss};
}

// 4. Search reaches the exhaustive optimum.
Outcome search_effectiveness() {
  constexpr std::size_t kBudget = 200, kSeeds = 10, kRequired = 9;
  struct Case {
    const char* fixture;
    EditKind family;
  };
  bool ok = true;
  std::vector<std::string> parts;
  for (auto c : {Case{"param_knob", EditKind::kParamSet}, Case{"dead_stmt", EditKind::kStmtDelete}}) {
    auto b = Bench::fixture(c.fixture);
    Rng orng(0);
    auto opt = brute_force_optimum(*b->evaluator, {c.family}, 1, b->train, orng);
    std::size_t hits = 0;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      SearchConfig cfg;
      cfg.families = {c.family};
      cfg.budget = kBudget;
      cfg.seed = seed;
      Rng rng(seed);
      auto t = local_search(*b->evaluator, b->train, cfg, rng);
      if (compare(t.best_report, opt.report) == 0) ++hits;
    }
    ok &= hits >= kRequired;
    parts.push_back(std::string(c.fixture) + " " + std::to_string(hits) + "/10 (optimum " +
                    serialize_edit(opt.patch.edits.at(0)) + ")");
  }
  return {ok, join(parts, ", ") + ", need >= 9"};
}

// 5. Minimization against the subset oracle.
Outcome minimization_oracle() {
  constexpr int kPatches = 100;
  constexpr std::size_t kMaxLen = 8;
  int equal = 0, removal_ok = 0, shortest = 0;
  std::string first_miss;
  auto combo = Bench::fixture("combo");
  auto pair = Bench::fixture("pair_knobs");
  const std::vector<std::string> val{"2"};
  Rng rng(55);
  for (int i = 0; i < kPatches; ++i) {
    Bench& b = i % 2 ? *pair : *combo;
    std::vector<EditKind> kinds;
    if (i % 2) {
      kinds = {EditKind::kParamSet};
    } else {
      kinds.assign(std::begin(kAllEditKinds), std::end(kAllEditKinds));
    }
    Patch p;
    std::size_t len = 1 + uniform_index(rng, kMaxLen);
    for (std::size_t e = 0; e < len; ++e)
      p.edits.push_back(sample_random_edit(b.model, kinds[uniform_index(rng, kinds.size())], rng));

    Evaluator& ev = *b.evaluator;
    Patch q = minimize_patch(ev, p, val);
    FitnessReport got = ev.evaluate(q, val);

    // every subsequence, by bitmask
    FitnessReport best = ev.evaluate(Patch{}, val);
    std::size_t best_len = 0;
    for (std::uint32_t mask = 1; mask < (1u << len); ++mask) {
      Patch sub;
      for (std::size_t e = 0; e < len; ++e)
        if (mask & (1u << e)) sub.edits.push_back(p.edits[e]);
      auto r = ev.evaluate(sub, val);
      auto order = compare(r, best);
      if (order < 0 || (order == 0 && sub.size() < best_len)) {
        best = r;
        best_len = sub.size();
      }
    }
    if (compare(got, best) == 0) {
      ++equal;
    } else {
      if (first_miss.empty()) first_miss = " first miss: patch " + std::to_string(i);
      std::cerr << "criterion 5 miss, patch " << i << ":\n" << serialize_patch(p) << "minimized to:\n"
                << serialize_patch(q) << "fitness " << name_of(got.status) << ' '
                << (got.objectives.empty() ? std::string("-") : num(got.objectives[0], 10)) << ", subset optimum "
                << (best.objectives.empty() ? std::string("-") : num(best.objectives[0], 10)) << "\n";
    }
    if (q.size() == best_len) ++shortest;

    bool minimal = true;
    for (std::size_t e = 0; e < q.size(); ++e) {
      Patch less = q;
      less.edits.erase(less.edits.begin() + static_cast<std::ptrdiff_t>(e));
      if (compare(ev.evaluate(less, val), got) < 0) minimal = false;
    }
    if (minimal) ++removal_ok;
  }
  bool ok = equal == kPatches && removal_ok == kPatches;
  return {ok, "fitness equal " + std::to_string(equal) + "/100, no improving removal " +
                  std::to_string(removal_ok) + "/100, shortest length " + std::to_string(shortest) +
                  "/100 (reported only)" + first_miss};
}

// 6. Combining patches from two families beats both inputs.
Outcome combined_validation() {
  constexpr std::uint64_t kSeeds = 10;
  constexpr std::size_t kBudget = 60;
  auto b = Bench::fixture("combo");
  auto& ev = *b->evaluator;
  // training and validation roles, disjoint
  const std::vector<std::string> train{"1", "2", "3"};
  const std::vector<std::string> val{"4", "5", "6", "7"};
  int wins = 0;
  std::string first_miss;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    std::vector<Patch> inputs;
    for (EditKind family : {EditKind::kParamSet, EditKind::kStmtDelete}) {
      SearchConfig cfg;
      cfg.families = {family};
      cfg.budget = kBudget;
      cfg.seed = seed;
      Rng rng(seed);
      auto t = local_search(ev, train, cfg, rng);
      inputs.push_back(minimize_patch(ev, t.best, val));
    }
    Patch combined = combine_patches(ev, inputs, val);
    auto r = ev.evaluate(combined, val);

    Patch concat;
    for (const auto& p : inputs) concat.edits.insert(concat.edits.end(), p.edits.begin(), p.edits.end());
    FitnessReport best = ev.evaluate(Patch{}, val);
    for (std::uint32_t mask = 1; mask < (1u << concat.size()); ++mask) {
      Patch sub;
      for (std::size_t e = 0; e < concat.size(); ++e)
        if (mask & (1u << e)) sub.edits.push_back(concat.edits[e]);
      auto s = ev.evaluate(sub, val);
      if (compare(s, best) < 0) best = s;
    }
    bool ok = compare(r, ev.evaluate(inputs[0], val)) < 0 && compare(r, ev.evaluate(inputs[1], val)) < 0 &&
              compare(r, best) == 0;
    if (ok) {
      ++wins;
    } else if (first_miss.empty()) {
      first_miss = " first miss: seed " + std::to_string(seed);
    }
  }
  return {wins == static_cast<int>(kSeeds), std::to_string(wins) + "/10 seeds" + first_miss};
}

// 7. Accepted fitness is monotone and the budget is charged exactly.
Outcome monotonicity() {
  constexpr int kRuns = 20;
  auto b = Bench::fixture("combo");
  const std::vector<std::string> inst{"3"};
  int good = 0;
  for (int seed = 0; seed < kRuns; ++seed) {
    SearchConfig cfg;
    cfg.families = EditFamilies(std::begin(kAllEditKinds), std::end(kAllEditKinds));
    cfg.budget = 10 + 5 * static_cast<std::size_t>(seed);
    cfg.seed = static_cast<std::uint64_t>(seed);
    Rng rng(cfg.seed);
    auto t = local_search(*b->evaluator, inst, cfg, rng);
    bool ok = t.evaluations_charged == std::min(cfg.budget, t.steps.size()) &&
              t.evaluations_charged == cfg.budget;
    std::vector<double> current = t.baseline.objectives;
    for (const auto& s : t.steps) {
      if (!s.accepted) continue;
      ok &= s.status == VariantStatus::kClean && compare_objectives(s.objectives, current) <= 0;
      current = s.objectives;
    }
    ok &= current == t.best_report.objectives;
    if (ok) ++good;
  }
  return {good == kRuns, std::to_string(good) + "/20 searches monotone with exact budget"};
}

// 8. Determinism and round trips.
Outcome determinism() {
  int traces = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::string text[2];
    for (auto& out : text) {
      auto b = Bench::fixture("combo");
      SearchConfig cfg;
      cfg.families = EditFamilies(std::begin(kAllEditKinds), std::end(kAllEditKinds));
      cfg.budget = 30;
      cfg.seed = seed;
      Rng rng(seed);
      out = trace_to_jsonl(local_search(*b->evaluator, std::vector<std::string>{"2"}, cfg, rng));
    }
    if (text[0] == text[1]) ++traces;
  }
  Rng rng(8);
  int round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    Patch p = testing::random_patch(rng, 8);
    std::string text = serialize_patch(p);
    Patch back = parse_patch(text);
    if (back == p && serialize_patch(back) == text) ++round_trips;
  }
  int files = 0, lossless = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(testing::fixtures_dir())) {
    if (e.path().extension() != ".xml") continue;
    ++files;
    std::string text = read_file(e.path());
    if (XmlDocument::parse(text).render_xml() == text) ++lossless;
  }
  bool ok = traces == 5 && round_trips == 1000 && files > 0 && lossless == files;
  return {ok, "traces " + std::to_string(traces) + "/5 identical, round trips " + std::to_string(round_trips) +
                  "/1000, lossless XML " + std::to_string(lossless) + "/" + std::to_string(files)};
}

// 9. Timeouts, invalid configurations and cache hits.
Outcome robustness() {
  constexpr double kTimeout = 1.0, kSlack = 1.0;
  testing::TempDir dir;
  auto sleeper = testing::bench_from(dir, {{"scenario.cfg", "run_cmd = sleep 30; echo {INST}\nrun_timeout_s = 1\n"}});
  auto start = std::chrono::steady_clock::now();
  auto r = sleeper->evaluator->evaluate(Patch{}, std::vector<std::string>{"x"});
  double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool timeout_ok = r.status == VariantStatus::kTimeout && took <= kTimeout + kSlack;

  testing::TempDir dir2;
  auto knob = testing::bench_from(
      dir2, {{"knob.sh.xml", read_file(testing::fixtures_dir() / "param_knob/knob.sh.xml")},
             {"params.txt", "level [1,8] [1] int uniform --level={}\nforbidden {level=2}\n"},
             {"scenario.cfg",
              "target_files = knob.sh.xml\nparam_space_file = params.txt\nstmt_tags = stmt\n"
              "run_cmd = sh knob.sh {INST} {PARAMS}\nobjectives = regex:cost: (-?[0-9]+)\n"}});
  auto& ev = *knob->evaluator;
  const std::vector<std::string> inst{"1", "2"};
  auto invalid = ev.evaluate(Patch{{ParamSet{"level", "2"}}}, inst);
  bool invalid_ok = invalid.status == VariantStatus::kInvalidConfig && ev.process_launches() == 0;

  auto first = ev.evaluate(Patch{{ParamSet{"level", "6"}}}, inst);
  auto before = ev.process_launches();
  auto second = ev.evaluate(Patch{{ParamSet{"level", "6"}}}, inst);
  bool cache_ok = first.clean() && !first.cache_hit && second.cache_hit &&
                  second.objectives == first.objectives && ev.process_launches() == before;

  return {timeout_ok && invalid_ok && cache_ok,
          std::string("TIMEOUT after ") + num(took, 3) + "s (limit 2s) " + (timeout_ok ? "ok" : "BAD") +
              ", INVALID_CONFIG with 0 launches " + (invalid_ok ? "ok" : "BAD") + ", cache hit with 0 launches " +
              (cache_ok ? "ok" : "BAD")};
}

// 10. Fold plan integrity.
Outcome fold_integrity() {
  constexpr std::size_t kK = 10, kInstances = 100, kCap = 10;
  bool ok = true;
  for (std::size_t n : {kInstances, std::size_t{250}}) {
    std::vector<std::string> inst;
    for (std::size_t i = 0; i < n; ++i) inst.push_back("inst" + std::to_string(i));
    Rng rng(n);
    auto plan = make_fold_plan(inst, kK, rng);
    std::multiset<std::string> seen;
    ok &= plan.folds.size() == kK;
    for (const auto& f : plan.folds) {
      seen.insert(f.members.begin(), f.members.end());
      ok &= f.training.size() == std::min(kCap, f.members.size());
      std::set<std::string> own(f.members.begin(), f.members.end());
      for (const auto& t : f.training) ok &= own.count(t) == 1;
      for (const auto& v : f.validation) ok &= own.count(v) == 0;
      ok &= f.validation.size() + f.members.size() == n;
    }
    ok &= seen == std::multiset<std::string>(inst.begin(), inst.end());
  }
  return {ok, "k=10 over 100 (and 250) instances: partition, training <= 10, validation disjoint"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "report arithmetic", 1, report_arithmetic},
      {2, "CoV arithmetic", 1, cov_arithmetic},
      {3, "space-count formulas", 10, space_counts},
      {4, "local-search effectiveness", 30, search_effectiveness},
      {5, "minimization oracle equivalence", 120, minimization_oracle},
      {6, "combined-validation gain", 30, combined_validation},
      {7, "monotonicity and budget", 30, monotonicity},
      {8, "determinism and round trips", 30, determinism},
      {9, "evaluation robustness", 30, robustness},
      {10, "k-fold integrity", 5, fold_integrity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = took < c.limit_s;
    bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s  %2d  %-32s %s [%.2fs, limit %gs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), took, c.limit_s, in_time ? "" : ", TOO SLOW");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
