// Copyright 2026 The polecart Authors.
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

#include "polecart/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "polecart/error.hpp"

namespace polecart {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

double parse_double(std::string_view key, std::string_view v) {
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(v) + "'");
  }
  return d;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
  }
  return x;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(std::string(key), "expected true/false, got '" + std::string(v) + "'");
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += f(xs[i]);
  }
  return s;
}

struct Field {
  std::string_view key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

Field range_field(std::string_view key, int dim) {
  return {key,
          [dim](const ExperimentConfig& c) {
            return fmt_double(c.ranges[dim].lo) + "," + fmt_double(c.ranges[dim].hi);
          },
          [key, dim](ExperimentConfig& c, std::string_view v) {
            const auto parts = split_list(v);
            if (parts.size() != 2) throw ConfigError(std::string(key), "expected 'lo,hi'");
            c.ranges[dim] = {parse_double(key, parts[0]), parse_double(key, parts[1])};
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"run.algorithm", [](auto& c) { return std::string(to_string(c.algorithm)); },
       [](auto& c, auto v) { c.algorithm = algorithm_from_string(v); }},
      {"run.episodes", [](auto& c) { return std::to_string(c.episodes); },
       [](auto& c, auto v) { c.episodes = parse_int<int>("run.episodes", v); }},
      {"run.seeds",
       [](auto& c) { return join(c.seeds, [](auto s) { return std::to_string(s); }); },
       [](auto& c, auto v) {
         c.seeds.clear();
         if (v.empty()) return;
         for (auto p : split_list(v)) c.seeds.push_back(parse_int<std::uint64_t>("run.seeds", p));
       }},
      {"run.ma_window", [](auto& c) { return std::to_string(c.ma_window); },
       [](auto& c, auto v) { c.ma_window = parse_int<std::size_t>("run.ma_window", v); }},
      {"run.threshold", [](auto& c) { return fmt_double(c.threshold); },
       [](auto& c, auto v) { c.threshold = parse_double("run.threshold", v); }},
      {"run.threads", [](auto& c) { return std::to_string(c.threads); },
       [](auto& c, auto v) { c.threads = parse_int<int>("run.threads", v); }},
      {"run.record_wall_time", [](auto& c) { return std::string(c.record_wall_time ? "true" : "false"); },
       [](auto& c, auto v) { c.record_wall_time = parse_bool("run.record_wall_time", v); }},
      {"env.reward_on_termination",
       [](auto& c) { return std::string(c.reward_on_termination ? "true" : "false"); },
       [](auto& c, auto v) { c.reward_on_termination = parse_bool("env.reward_on_termination", v); }},
      {"schedule.kind", [](auto& c) { return std::string(to_string(c.schedule.kind)); },
       [](auto& c, auto v) {
         const auto kind = schedule_kind_from_string(v);
         if (kind != c.schedule.kind) {
           c.schedule.kind = kind;
           c.schedule.param = Schedule::default_param(kind);
         }
       }},
      {"schedule.param", [](auto& c) { return fmt_double(c.schedule.param); },
       [](auto& c, auto v) { c.schedule.param = parse_double("schedule.param", v); }},
      {"schedule.floor", [](auto& c) { return fmt_double(c.schedule.floor); },
       [](auto& c, auto v) { c.schedule.floor = parse_double("schedule.floor", v); }},
      {"schedule.clock", [](auto& c) { return std::string(to_string(c.epsilon_clock)); },
       [](auto& c, auto v) { c.epsilon_clock = epsilon_clock_from_string(v); }},
      {"tabular.alpha", [](auto& c) { return fmt_double(c.tabular_alpha); },
       [](auto& c, auto v) { c.tabular_alpha = parse_double("tabular.alpha", v); }},
      {"tabular.gamma", [](auto& c) { return fmt_double(c.tabular_gamma); },
       [](auto& c, auto v) { c.tabular_gamma = parse_double("tabular.gamma", v); }},
      {"tabular.bins",
       [](auto& c) {
         return join(std::vector<int>(c.bins.begin(), c.bins.end()),
                     [](int b) { return std::to_string(b); });
       },
       [](auto& c, auto v) {
         const auto parts = split_list(v);
         if (parts.size() != 4) throw ConfigError("tabular.bins", "expected four bin counts");
         for (int i = 0; i < 4; ++i) c.bins[i] = parse_int<int>("tabular.bins", parts[i]);
       }},
      range_field("tabular.range_x", 0),
      range_field("tabular.range_v", 1),
      range_field("tabular.range_theta", 2),
      range_field("tabular.range_omega", 3),
      {"dqn.layers",
       [](auto& c) { return join(c.layer_widths, [](auto w) { return std::to_string(w); }); },
       [](auto& c, auto v) {
         c.layer_widths.clear();
         for (auto p : split_list(v)) c.layer_widths.push_back(parse_int<std::size_t>("dqn.layers", p));
       }},
      {"dqn.gamma", [](auto& c) { return fmt_double(c.dqn_gamma); },
       [](auto& c, auto v) { c.dqn_gamma = parse_double("dqn.gamma", v); }},
      {"dqn.lr", [](auto& c) { return fmt_double(c.lr); },
       [](auto& c, auto v) { c.lr = parse_double("dqn.lr", v); }},
      {"dqn.optimizer",
       [](auto& c) { return std::string(c.optimizer == OptimizerKind::Adam ? "adam" : "sgd"); },
       [](auto& c, auto v) {
         if (v == "adam") c.optimizer = OptimizerKind::Adam;
         else if (v == "sgd") c.optimizer = OptimizerKind::Sgd;
         else throw ConfigError("dqn.optimizer", "expected adam or sgd");
       }},
      {"dqn.target_sync_every", [](auto& c) { return std::to_string(c.target_sync_every); },
       [](auto& c, auto v) { c.target_sync_every = parse_int<std::int64_t>("dqn.target_sync_every", v); }},
      {"dqn.warmup", [](auto& c) { return std::to_string(c.warmup); },
       [](auto& c, auto v) { c.warmup = parse_int<std::uint64_t>("dqn.warmup", v); }},
      {"replay.strategy", [](auto& c) { return std::string(to_string(c.replay)); },
       [](auto& c, auto v) { c.replay = replay_strategy_from_string(v); }},
      {"replay.capacity", [](auto& c) { return std::to_string(c.capacity); },
       [](auto& c, auto v) { c.capacity = parse_int<std::size_t>("replay.capacity", v); }},
      {"replay.batch_size", [](auto& c) { return std::to_string(c.batch_size); },
       [](auto& c, auto v) { c.batch_size = parse_int<std::size_t>("replay.batch_size", v); }},
      {"replay.per_alpha", [](auto& c) { return fmt_double(c.per_alpha); },
       [](auto& c, auto v) { c.per_alpha = parse_double("replay.per_alpha", v); }},
      {"replay.priority_eps", [](auto& c) { return fmt_double(c.priority_eps); },
       [](auto& c, auto v) { c.priority_eps = parse_double("replay.priority_eps", v); }},
      {"replay.beta0", [](auto& c) { return fmt_double(c.beta0); },
       [](auto& c, auto v) { c.beta0 = parse_double("replay.beta0", v); }},
      {"replay.beta_steps", [](auto& c) { return std::to_string(c.beta_steps); },
       [](auto& c, auto v) { c.beta_steps = parse_int<std::int64_t>("replay.beta_steps", v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::Tabular ? "tabular" : "dqn"; }

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "tabular") return Algorithm::Tabular;
  if (name == "dqn") return Algorithm::Dqn;
  throw ConfigError("run.algorithm", "expected tabular or dqn, got '" + std::string(name) + "'");
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, trim(value));
      return;
    }
  }
  throw ConfigError(std::string(key), "unknown key");
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

std::string ExperimentConfig::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  check(episodes >= 1, "run.episodes", "must be >= 1");
  check(!seeds.empty(), "run.seeds", "at least one seed required");
  check(ma_window >= 1, "run.ma_window", "must be >= 1");
  check(threads >= 1, "run.threads", "must be >= 1");
  check(schedule.floor >= 0.0 && schedule.floor <= 1.0, "schedule.floor", "must lie in [0,1]");
  switch (schedule.kind) {
    case ScheduleKind::Exponential:
    case ScheduleKind::Sinusoidal:
      check(schedule.param >= 0.0 && schedule.param <= 1.0, "schedule.param", "decay base must lie in [0,1]");
      break;
    case ScheduleKind::Linear:
    case ScheduleKind::Logarithmic:
      check(schedule.param > 0.0, "schedule.param", "must be positive");
      break;
    case ScheduleKind::Inverse:
      check(schedule.param >= 0.0, "schedule.param", "must be >= 0");
      break;
    case ScheduleKind::Constant:
      check(schedule.param >= 0.0 && schedule.param <= 1.0, "schedule.param", "must lie in [0,1]");
      break;
  }
  check(tabular_alpha > 0.0 && tabular_alpha <= 1.0, "tabular.alpha", "must lie in (0,1]");
  check(tabular_gamma > 0.0 && tabular_gamma <= 1.0, "tabular.gamma", "must lie in (0,1]");
  for (int b : bins) check(b >= 1, "tabular.bins", "bin counts must be >= 1");
  const char* range_keys[4] = {"tabular.range_x", "tabular.range_v", "tabular.range_theta",
                               "tabular.range_omega"};
  for (int i = 0; i < 4; ++i) check(ranges[i].hi > ranges[i].lo, range_keys[i], "need lo < hi");
  check(layer_widths.size() >= 2 && layer_widths.front() == 4 && layer_widths.back() == 2,
        "dqn.layers", "widths must run 4,...,2");
  for (auto w : layer_widths) check(w >= 1, "dqn.layers", "widths must be >= 1");
  check(dqn_gamma > 0.0 && dqn_gamma <= 1.0, "dqn.gamma", "must lie in (0,1]");
  check(lr > 0.0, "dqn.lr", "must be positive");
  check(target_sync_every >= 1, "dqn.target_sync_every", "must be >= 1");
  check(capacity >= 1, "replay.capacity", "must be >= 1");
  check(batch_size >= 1, "replay.batch_size", "must be >= 1");
  check(per_alpha >= 0.0, "replay.per_alpha", "must be >= 0");
  check(priority_eps > 0.0, "replay.priority_eps", "must be > 0");
  check(beta0 > 0.0 && beta0 <= 1.0, "replay.beta0", "must lie in (0,1]");
  check(beta_steps >= 0, "replay.beta_steps", "must be >= 0");
}

CartPoleParams ExperimentConfig::env_params() const {
  CartPoleParams p;
  p.reward_on_termination = reward_on_termination;
  return p;
}

TabularOptions ExperimentConfig::tabular_options() const {
  return TabularOptions{tabular_alpha, tabular_gamma, Discretizer(bins, ranges), epsilon_clock};
}

DqnOptions ExperimentConfig::dqn_options() const {
  DqnOptions o;
  o.layer_widths = layer_widths;
  o.gamma = dqn_gamma;
  o.lr = lr;
  o.optimizer.kind = optimizer;
  o.target_sync_every = target_sync_every;
  o.batch_size = batch_size;
  o.warmup = warmup;
  o.replay = ReplayOptions{replay, capacity, per_alpha, priority_eps};
  o.beta0 = beta0;
  o.beta_steps = beta_steps;
  o.clock = epsilon_clock;
  return o;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::vector<std::pair<std::string, std::string>> assignments;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    assignments.emplace_back(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
  }
  // schedule.kind resets schedule.param to the kind's default, so it goes first
  // regardless of where it appears in the file.
  std::stable_partition(assignments.begin(), assignments.end(),
                        [](const auto& kv) { return kv.first == "schedule.kind"; });
  for (const auto& [key, value] : assignments) set_config_value(cfg, key, value);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace polecart
