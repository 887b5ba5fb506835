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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "polecart/env_cartpole.hpp"
#include "polecart/rng.hpp"

namespace polecart {

enum class ScheduleKind { Exponential, Linear, Logarithmic, Inverse, Sinusoidal, Constant };

std::string_view to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

// An epsilon decay rule evaluated on the global environment-step counter.
// `param` meaning depends on the kind:
//   Exponential  decay base b          eps = b^t
//   Linear       horizon H             eps = max(0, 1 - t/H)
//   Logarithmic  scale S               eps = max(0, 1 - ln(t+1)/S)
//   Inverse      rate k                eps = 1 / (1 + k t)
//   Sinusoidal   decay base b          eps = b^t |sin(t/2)|
//   Constant     value c               eps = c
// The result is clamped to [floor, 1].
struct Schedule {
  ScheduleKind kind = ScheduleKind::Exponential;
  double param = 0.9999;
  double floor = 0.0;

  static Schedule exponential(double base = 0.9999) { return {ScheduleKind::Exponential, base}; }
  static Schedule linear(double horizon = 25000.0) { return {ScheduleKind::Linear, horizon}; }
  static Schedule logarithmic(double scale = 10.0) { return {ScheduleKind::Logarithmic, scale}; }
  static Schedule inverse(double rate = 3.0 / 1000.0) { return {ScheduleKind::Inverse, rate}; }
  static Schedule sinusoidal(double base = 0.9999) { return {ScheduleKind::Sinusoidal, base}; }
  static Schedule constant(double value) { return {ScheduleKind::Constant, value}; }

  static double default_param(ScheduleKind kind);

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

double epsilon_at(const Schedule& schedule, std::int64_t t);

// What `t` counts when a trainer evaluates a schedule.
enum class EpsilonClock { Step, Episode };

std::string_view to_string(EpsilonClock clock);
EpsilonClock epsilon_clock_from_string(std::string_view name);

struct ExplorationDecision {
  bool explore = false;
  Action chosen_action = Action::Left;
};

// Index of the largest entry; ties broken uniformly at random. Draws from
// `rng` only when there is a tie.
int argmax_random_tie(std::span<const double> values, Rng& rng);

// Epsilon-greedy: c ~ U[0,1); explore with a uniform action when c < epsilon,
// otherwise take the greedy action.
ExplorationDecision select_action(std::span<const double> q_values, double epsilon, Rng& rng);

}  // namespace polecart
