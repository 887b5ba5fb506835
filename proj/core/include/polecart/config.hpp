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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "polecart/dqn.hpp"
#include "polecart/env_cartpole.hpp"
#include "polecart/schedules.hpp"
#include "polecart/tabular_q.hpp"

namespace polecart {

enum class Algorithm { Tabular, Dqn };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

// Everything needed to reproduce a set of runs. Every field has a default,
// so a default-constructed config is runnable.
//
// Text form: one `dotted.key = value` per line, `#` comments, blank lines
// ignored. Unknown keys are rejected. Lists are comma separated.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Dqn;
  int episodes = 600;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::size_t ma_window = 100;
  double threshold = 200.0;
  int threads = 1;
  bool record_wall_time = false;  // false keeps every output byte reproducible

  bool reward_on_termination = false;

  Schedule schedule = Schedule::exponential(0.9999);
  EpsilonClock epsilon_clock = EpsilonClock::Step;

  double tabular_alpha = 0.1;
  double tabular_gamma = 0.99;
  std::array<int, 4> bins = Discretizer::kDefaultBins;
  std::array<Interval, 4> ranges = Discretizer::kDefaultRanges;

  std::vector<std::size_t> layer_widths = {4, 8, 8, 2};
  double dqn_gamma = 0.99;
  double lr = 1e-3;
  OptimizerKind optimizer = OptimizerKind::Adam;
  std::int64_t target_sync_every = 100;
  std::uint64_t warmup = 500;

  ReplayStrategy replay = ReplayStrategy::Uniform;
  std::size_t capacity = 10000;
  std::size_t batch_size = 64;
  double per_alpha = 0.6;
  double priority_eps = 1e-5;
  double beta0 = 0.4;
  std::int64_t beta_steps = 0;  // 0: episodes * max episode steps

  // Canonical text form; parse_config(to_text()) == *this.
  std::string to_text() const;
  // FNV-1a 64 of to_text(), as 16 hex digits.
  std::string fingerprint() const;
  // Throws ConfigError naming the first invalid field.
  void validate() const;

  CartPoleParams env_params() const;
  TabularOptions tabular_options() const;
  DqnOptions dqn_options() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies one `key = value` assignment.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

}  // namespace polecart
