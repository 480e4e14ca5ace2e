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

#include "magpie/evaluator.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <exception>
#include <regex>
#include <thread>

#include "magpie/digest.hpp"
#include "magpie/errors.hpp"
#include "magpie/json_io.hpp"
#include "magpie/process.hpp"

namespace magpie {

namespace fs = std::filesystem;

std::string substitute(std::string text, std::string_view hole, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(hole, pos)) != std::string::npos) {
    text.replace(pos, hole.size(), value);
    pos += value.size();
  }
  return text;
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, n); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

EvaluationCache::EvaluationCache(const fs::path& file) {
  if (fs::exists(file)) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        auto doc = nlohmann::json::parse(line);
        FitnessReport r = report_from_json(doc.at("report"));
        entries_[doc.at("digest").get<std::string>()] = std::move(r);
      } catch (const std::exception&) {
        // A torn final line from an interrupted run; skip it.
      }
    }
  }
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  sink_.emplace(file, std::ios::app);
  if (!*sink_) throw WorkspaceError("cannot open cache file '" + file.string() + "'");
}

std::optional<FitnessReport> EvaluationCache::lookup(const std::string& digest) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EvaluationCache::insert(const FitnessReport& report) {
  std::lock_guard lock(mu_);
  entries_[report.digest] = report;
  if (sink_) {
    nlohmann::json rec{{"digest", report.digest}, {"report", to_json(report)}};
    *sink_ << rec.dump() << '\n' << std::flush;
  }
}

std::size_t EvaluationCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

struct Evaluator::Prepared {
  VariantArtifacts artifacts;
  RenderedConfiguration config;
  std::string digest;
};

Evaluator::Evaluator(const TargetModel& model, const Scenario& scenario,
                     std::shared_ptr<EvaluationCache> cache)
    : model_(model),
      scenario_(scenario),
      cache_(std::move(cache)),
      fingerprint_(scenario.fingerprint()),
      slots_(std::clamp<std::ptrdiff_t>(scenario.process_slots, 1, 1024)) {}

Evaluator::Prepared Evaluator::prepare(const Patch& patch,
                                       std::span<const std::string> instances) const {
  Prepared p;
  p.artifacts = apply_patch(model_, patch);
  p.config = render_configuration(model_.params(), p.artifacts.assignment);
  DigestBuilder d;
  d.add(fingerprint_);
  for (const auto& f : p.artifacts.files) d.add(f.file_id).add(f.source);
  d.add(p.config.valid ? "valid" : "invalid").add(p.config.text);
  d.add(std::to_string(instances.size()));
  for (const auto& i : instances) d.add(i);
  p.digest = d.finish();
  return p;
}

std::string Evaluator::digest(const Patch& patch,
                              std::span<const std::string> instances) const {
  return prepare(patch, instances).digest;
}

FitnessReport Evaluator::evaluate(const Patch& patch,
                                  std::span<const std::string> instances,
                                  bool use_cache) {
  if (instances.empty()) throw PreconditionError("evaluation needs at least one instance");
  auto start = std::chrono::steady_clock::now();
  Prepared prepared = prepare(patch, instances);
  std::uint64_t ordinal = ++ordinal_;

  FitnessReport report;
  std::optional<FitnessReport> hit;
  if (use_cache) hit = cache_->lookup(prepared.digest);
  if (hit) {
    report = std::move(*hit);
    report.cache_hit = true;
  } else if (!prepared.config.valid) {
    report.status = VariantStatus::kInvalidConfig;
    report.digest = prepared.digest;
    cache_->insert(report);
  } else {
    report = run_variant(prepared, instances, ordinal);
    cache_->insert(report);
  }
  report.eval_ordinal = ordinal;
  log(patch, report,
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return report;
}

FitnessReport Evaluator::run_variant(const Prepared& prepared,
                                     std::span<const std::string> instances,
                                     std::uint64_t ordinal) {
  static std::atomic<std::uint64_t> dir_counter{0};
  fs::path dir = scenario_.work_dir / "evals" /
                 ("eval-" + std::to_string(::getpid()) + "-" + std::to_string(ordinal) +
                  "-" + std::to_string(++dir_counter));
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir, ec);
  if (ec) throw WorkspaceError("cannot create '" + dir.string() + "': " + ec.message());
  if (scenario_.project_dir) {
    fs::copy(*scenario_.project_dir, dir,
             fs::copy_options::recursive | fs::copy_options::overwrite_existing, ec);
    if (ec) throw WorkspaceError("cannot copy project into '" + dir.string() + "': " + ec.message());
  }
  for (const auto& f : prepared.artifacts.files) {
    fs::path out = dir / f.file_id;
    fs::create_directories(out.parent_path(), ec);
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    file << f.source;
    if (!file) throw WorkspaceError("cannot write '" + out.string() + "'");
  }

  FitnessReport report;
  report.digest = prepared.digest;
  const std::string& params = prepared.config.text;

  bool built = true;
  if (!scenario_.compile_cmd.empty()) {
    slots_.acquire();
    ++launches_;
    ProcessResult r;
    try {
      r = run_shell(substitute(scenario_.compile_cmd, "{PARAMS}", params), dir,
                    scenario_.compile_timeout_s);
    } catch (...) {
      slots_.release();
      throw;
    }
    slots_.release();
    if (r.timed_out) {
      report.status = VariantStatus::kTimeout;
      built = false;
    } else if (!r.ok()) {
      report.status = VariantStatus::kCompileError;
      built = false;
    }
  }

  if (built) {
    report.instances.resize(instances.size());
    parallel_for(instances.size(), scenario_.process_slots, [&](std::size_t i) {
      report.instances[i] = run_instance(instances[i], params, dir);
    });
    const std::size_t arity = scenario_.objective_arity();
    std::vector<double> sum(arity, 0.0);
    for (const auto& rec : report.instances) {
      if (rec.status != VariantStatus::kClean) {
        report.status = rec.status;
        break;
      }
      for (std::size_t j = 0; j < arity; ++j) sum[j] += rec.objectives[j];
    }
    if (report.clean()) {
      for (double& s : sum) s /= static_cast<double>(instances.size());
      report.objectives = std::move(sum);
    }
  }

  if (report.clean() || !scenario_.keep_failures) fs::remove_all(dir, ec);
  return report;
}

InstanceRecord Evaluator::run_instance(const std::string& instance,
                                       const std::string& params, const fs::path& dir) {
  InstanceRecord rec;
  rec.instance = instance;
  std::string cmd = substitute(substitute(scenario_.run_cmd, "{INST}", instance),
                               "{PARAMS}", params);
  bool counted = false;
  for (const auto& o : scenario_.objectives) {
    counted = counted || o.source == MeasurementSpec::Source::kCounterCommand;
  }
  if (counted) cmd = substitute(scenario_.counter_cmd, "{CMD}", cmd);

  slots_.acquire();
  ++launches_;
  ProcessResult r;
  try {
    r = run_shell(cmd, dir, scenario_.run_timeout_s);
  } catch (...) {
    slots_.release();
    throw;
  }
  slots_.release();
  rec.wall_time = r.wall_seconds;
  if (r.timed_out) {
    rec.status = VariantStatus::kTimeout;
    return rec;
  }
  if (!r.ok()) {
    rec.status = VariantStatus::kRuntimeError;
    return rec;
  }
  for (const auto& o : scenario_.objectives) {
    if (o.source == MeasurementSpec::Source::kWallClock) {
      rec.objectives.push_back(r.wall_seconds);
      continue;
    }
    std::smatch m;
    std::regex re(o.pattern);
    if (!std::regex_search(r.output, m, re)) {
      rec.status = VariantStatus::kOutputError;
      rec.objectives.clear();
      return rec;
    }
    for (std::size_t g = 1; g < m.size(); ++g) {
      try {
        std::size_t used = 0;
        std::string text = m[g].str();
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        rec.objectives.push_back(v);
      } catch (const std::exception&) {
        rec.status = VariantStatus::kOutputError;
        rec.objectives.clear();
        return rec;
      }
    }
  }
  return rec;
}

void Evaluator::log(const Patch& patch, const FitnessReport& report, double wall) {
  if (!log_) return;
  nlohmann::json rec{{"eval", report.eval_ordinal},
                     {"patch", serialize_patch(patch)},
                     {"digest", report.digest},
                     {"status", name_of(report.status)},
                     {"objectives", report.objectives},
                     {"cache_hit", report.cache_hit},
                     {"wall_time", wall}};
  std::lock_guard lock(log_mu_);
  *log_ << rec.dump() << '\n';
}

}  // namespace magpie
