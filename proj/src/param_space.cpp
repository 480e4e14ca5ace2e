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

#include "magpie/param_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "magpie/errors.hpp"

namespace magpie {

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  while (true) {
    auto comma = s.find(',');
    out.emplace_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t number)
      : line_(line), number_(number) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw SpaceError("parameter space line " + std::to_string(number_) + ": " +
                     what);
  }

  void skip() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) {
      ++pos_;
    }
  }

  bool at(char c) {
    skip();
    return pos_ < line_.size() && line_[pos_] == c;
  }

  std::string_view word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') {
      ++pos_;
    }
    return line_.substr(start, pos_ - start);
  }

  std::string_view peek_word() {
    std::size_t saved = pos_;
    std::string_view w = word();
    pos_ = saved;
    return w;
  }

  // Contents of a bracketed group opening at the cursor.
  std::string_view group(char open, char close) {
    skip();
    if (pos_ >= line_.size() || line_[pos_] != open) {
      fail(std::string("expected '") + open + "'");
    }
    auto end = line_.find(close, pos_);
    if (end == std::string_view::npos) fail(std::string("missing '") + close + "'");
    std::string_view inner = line_.substr(pos_ + 1, end - pos_ - 1);
    pos_ = end + 1;
    return inner;
  }

  std::string_view rest() {
    skip();
    std::string_view r = trim(line_.substr(pos_));
    pos_ = line_.size();
    return r;
  }

  bool starts_with(std::string_view s) {
    skip();
    return line_.substr(pos_).starts_with(s);
  }

  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view line_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

ParamSpec parse_param_line(std::string_view name, LineCursor& cur) {
  ParamSpec spec;
  spec.name = std::string(name);
  if (cur.at('{')) {
    spec.values = split_list(cur.group('{', '}'));
    std::set<std::string> vs(spec.values.begin(), spec.values.end());
    spec.kind = vs == std::set<std::string>{"true", "false"} ? ParamKind::kBoolean
                                                             : ParamKind::kCategorical;
    spec.default_value = std::string(trim(cur.group('[', ']')));
  } else if (cur.at('[')) {
    auto bounds = split_list(cur.group('[', ']'));
    if (bounds.size() != 2) cur.fail("numeric domain must be [lo,hi]");
    auto lo = parse_double(bounds[0]);
    auto hi = parse_double(bounds[1]);
    if (!lo || !hi) cur.fail("numeric bounds must be numbers");
    spec.lo = *lo;
    spec.hi = *hi;
    spec.default_value = std::string(trim(cur.group('[', ']')));
    std::optional<ParamKind> kind;
    while (true) {
      if (cur.starts_with("special{")) {
        cur.advance(7);
        spec.special_values = split_list(cur.group('{', '}'));
        if (cur.at(':')) {
          cur.advance(1);
          auto w = parse_double(cur.word());
          if (!w) cur.fail("special weight must be a number");
          spec.special_weight = *w;
        }
        continue;
      }
      std::string_view w = cur.peek_word();
      if (w == "int" || w == "integer") {
        kind = ParamKind::kInteger;
      } else if (w == "float") {
        kind = ParamKind::kFloat;
      } else if (w == "uniform") {
        spec.distribution = Distribution::kUniform;
      } else if (w == "log") {
        spec.distribution = Distribution::kLogUniform;
      } else {
        break;
      }
      cur.word();
    }
    if (!kind) {
      bool integral = parse_int(bounds[0]) && parse_int(bounds[1]) &&
                      parse_int(spec.default_value);
      kind = integral ? ParamKind::kInteger : ParamKind::kFloat;
    }
    spec.kind = *kind;
  } else {
    cur.fail("expected '{' or '[' after parameter name");
  }
  spec.render_template = std::string(cur.rest());
  if (spec.render_template.empty()) spec.render_template = "--" + spec.name + "={}";
  return spec;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::optional<std::size_t> ParamSpec::finite_domain_size() const {
  switch (kind) {
    case ParamKind::kCategorical:
    case ParamKind::kBoolean:
      return values.size();
    case ParamKind::kInteger: {
      double span = std::floor(hi) - std::ceil(lo) + 1;
      if (span >= 1 && span <= static_cast<double>(kMaxEnumeratedIntegerRange)) {
        return static_cast<std::size_t>(span);
      }
      return std::nullopt;
    }
    case ParamKind::kFloat:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::string> ParamSpec::domain_values() const {
  if (!numeric()) return values;
  std::vector<std::string> out;
  if (auto n = finite_domain_size()) {
    auto first = static_cast<long long>(std::ceil(lo));
    for (std::size_t i = 0; i < *n; ++i) {
      out.push_back(std::to_string(first + static_cast<long long>(i)));
    }
  }
  return out;
}

bool ParamSpec::contains(std::string_view value) const {
  switch (kind) {
    case ParamKind::kCategorical:
    case ParamKind::kBoolean:
      for (const auto& v : values) {
        if (v == value) return true;
      }
      return false;
    case ParamKind::kInteger: {
      auto v = parse_int(value);
      return v && static_cast<double>(*v) >= lo && static_cast<double>(*v) <= hi;
    }
    case ParamKind::kFloat: {
      auto v = parse_double(value);
      return v && *v >= lo && *v <= hi;
    }
  }
  return false;
}

std::string ParamSpec::canonical(std::string_view value) const {
  if (kind == ParamKind::kInteger) {
    if (auto v = parse_int(value)) return std::to_string(*v);
  } else if (kind == ParamKind::kFloat) {
    if (auto v = parse_double(value)) return format_number(*v);
  }
  return std::string(value);
}

std::string ParamSpec::instantiate(std::string_view value) const {
  std::string out;
  std::string_view t = render_template;
  while (true) {
    auto hole = t.find("{}");
    out += t.substr(0, hole);
    if (hole == std::string_view::npos) break;
    out += value;
    t.remove_prefix(hole + 2);
  }
  return out;
}

ParamSpace ParamSpace::parse(std::string_view text) {
  ParamSpace space;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line[0] == '#') continue;

    LineCursor cur(line, number);
    std::string_view head = cur.word();
    if (head == "condition") {
      std::string child(cur.word());
      if (cur.word() != "|") cur.fail("expected '|' in condition");
      Condition cond;
      cond.parent = std::string(cur.word());
      if (cur.word() != "in") cur.fail("expected 'in' in condition");
      cond.values = split_list(cur.group('{', '}'));
      if (!cur.rest().empty()) cur.fail("trailing text after condition");
      bool found = false;
      for (auto& p : space.params_) {
        if (p.name == child) {
          p.conditions.push_back(cond);
          found = true;
        }
      }
      if (!found) cur.fail("condition on unknown parameter '" + child + "'");
    } else if (head == "forbidden") {
      ForbiddenClause clause;
      for (const auto& term : split_list(cur.group('{', '}'))) {
        auto eq = term.find('=');
        if (eq == std::string::npos) cur.fail("forbidden term must be name=value");
        clause.terms.emplace_back(std::string(trim(term.substr(0, eq))),
                                  std::string(trim(std::string_view(term).substr(eq + 1))));
      }
      if (clause.terms.empty()) cur.fail("empty forbidden clause");
      if (!cur.rest().empty()) cur.fail("trailing text after forbidden clause");
      space.forbidden_.push_back(std::move(clause));
    } else {
      space.params_.push_back(parse_param_line(head, cur));
    }
  }
  space.validate();
  return space;
}

const ParamSpec* ParamSpace::find(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void ParamSpace::validate() const {
  std::set<std::string> names;
  for (const auto& p : params_) {
    auto fail = [&p](const std::string& what) -> void {
      throw SpaceError("parameter '" + p.name + "': " + what);
    };
    if (p.name.empty()) throw SpaceError("empty parameter name");
    if (!names.insert(p.name).second) fail("duplicate name");
    if (!p.numeric() && p.values.empty()) fail("empty domain");
    if (!p.numeric()) {
      std::set<std::string> uniq(p.values.begin(), p.values.end());
      if (uniq.size() != p.values.size()) fail("duplicate domain value");
    }
    if (p.numeric()) {
      if (p.lo > p.hi) fail("lo > hi");
      if (p.kind == ParamKind::kInteger && std::ceil(p.lo) > std::floor(p.hi)) {
        fail("integer range is empty");
      }
      if (p.distribution == Distribution::kLogUniform && p.lo <= 0) {
        fail("log-uniform requires lo > 0");
      }
    }
    if (!p.contains(p.default_value)) fail("default '" + p.default_value + "' not in domain");
    for (const auto& s : p.special_values) {
      if (!p.contains(s)) fail("special value '" + s + "' not in domain");
    }
    if (p.special_weight < 0 || p.special_weight > 1) fail("special weight outside [0,1]");
  }
  for (const auto& p : params_) {
    for (const auto& c : p.conditions) {
      const ParamSpec* parent = find(c.parent);
      if (!parent) {
        throw SpaceError("condition of '" + p.name + "' references unknown '" +
                         c.parent + "'");
      }
      for (const auto& v : c.values) {
        if (!parent->contains(v)) {
          throw SpaceError("condition of '" + p.name + "': '" + v +
                           "' not in domain of '" + c.parent + "'");
        }
      }
    }
  }
  // Cycle check over the condition graph.
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::function<void(const ParamSpec&)> visit = [&](const ParamSpec& p) {
    state[p.name] = 1;
    for (const auto& c : p.conditions) {
      int s = state[c.parent];
      if (s == 1) {
        throw SpaceError("condition cycle through '" + p.name + "' and '" +
                         c.parent + "'");
      }
      if (s == 0) visit(*find(c.parent));
    }
    state[p.name] = 2;
  };
  for (const auto& p : params_) {
    if (state[p.name] == 0) visit(p);
  }
  for (const auto& clause : forbidden_) {
    for (const auto& [name, value] : clause.terms) {
      const ParamSpec* p = find(name);
      if (!p) throw SpaceError("forbidden clause references unknown '" + name + "'");
      if (!p->contains(value)) {
        throw SpaceError("forbidden clause: '" + value + "' not in domain of '" +
                         name + "'");
      }
    }
  }
}

RenderedConfiguration render_configuration(const ParamSpace& space,
                                           const Assignment& assignment) {
  RenderedConfiguration out;
  for (const auto& [name, value] : assignment) {
    const ParamSpec* p = space.find(name);
    if (!p) throw UnknownParameter("unknown parameter '" + name + "'");
    if (!p->contains(value)) {
      throw OutOfDomainValue("value '" + value + "' outside the domain of '" +
                             name + "'");
    }
  }
  for (const auto& p : space.params()) {
    auto it = assignment.find(p.name);
    out.effective[p.name] =
        p.canonical(it == assignment.end() ? p.default_value : it->second);
  }

  std::map<std::string, bool> active;
  std::function<bool(const ParamSpec&)> is_active = [&](const ParamSpec& p) {
    if (auto it = active.find(p.name); it != active.end()) return it->second;
    bool on = true;
    for (const auto& c : p.conditions) {
      const ParamSpec& parent = *space.find(c.parent);
      bool hit = false;
      for (const auto& v : c.values) {
        hit = hit || parent.canonical(v) == out.effective[parent.name];
      }
      on = on && hit && is_active(parent);
    }
    active[p.name] = on;
    return on;
  };

  for (const auto& p : space.params()) {
    if (!is_active(p)) continue;
    out.active.push_back(p.name);
    std::string piece = p.instantiate(out.effective[p.name]);
    if (piece.empty()) continue;
    if (!out.text.empty()) out.text.push_back(' ');
    out.text += piece;
  }

  for (const auto& clause : space.forbidden()) {
    bool holds = true;
    for (const auto& [name, value] : clause.terms) {
      const ParamSpec& p = *space.find(name);
      holds = holds && is_active(p) && out.effective[name] == p.canonical(value);
    }
    if (holds) {
      out.valid = false;
      break;
    }
  }
  return out;
}

std::string sample_value(const ParamSpec& spec, Rng& rng) {
  if (!spec.special_values.empty() && bernoulli(rng, spec.special_weight)) {
    return spec.canonical(
        spec.special_values[uniform_index(rng, spec.special_values.size())]);
  }
  switch (spec.kind) {
    case ParamKind::kCategorical:
    case ParamKind::kBoolean:
      return spec.values[uniform_index(rng, spec.values.size())];
    case ParamKind::kInteger: {
      auto lo = static_cast<long long>(std::ceil(spec.lo));
      auto hi = static_cast<long long>(std::floor(spec.hi));
      if (spec.distribution == Distribution::kLogUniform) {
        double u = std::uniform_real_distribution<double>(
            std::log(static_cast<double>(lo)), std::log(static_cast<double>(hi) + 1.0))(rng);
        auto v = static_cast<long long>(std::floor(std::exp(u)));
        return std::to_string(std::clamp(v, lo, hi));
      }
      return std::to_string(std::uniform_int_distribution<long long>(lo, hi)(rng));
    }
    case ParamKind::kFloat: {
      if (spec.distribution == Distribution::kLogUniform) {
        double u = std::uniform_real_distribution<double>(std::log(spec.lo),
                                                          std::log(spec.hi))(rng);
        return format_number(std::clamp(std::exp(u), spec.lo, spec.hi));
      }
      return format_number(
          std::uniform_real_distribution<double>(spec.lo, spec.hi)(rng));
    }
  }
  return spec.default_value;
}

}  // namespace magpie
