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

#include "polecart/schedules.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "polecart/error.hpp"

namespace polecart {

namespace {

constexpr std::array<std::string_view, 6> kKindNames = {
    "exponential", "linear", "logarithmic", "inverse", "sinusoidal", "constant"};

}  // namespace

std::string_view to_string(ScheduleKind kind) { return kKindNames[static_cast<int>(kind)]; }

ScheduleKind schedule_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ScheduleKind>(i);
  }
  throw ConfigError("schedule.kind", "unknown schedule '" + std::string(name) + "'");
}

std::string_view to_string(EpsilonClock clock) {
  return clock == EpsilonClock::Step ? "step" : "episode";
}

EpsilonClock epsilon_clock_from_string(std::string_view name) {
  if (name == "step") return EpsilonClock::Step;
  if (name == "episode") return EpsilonClock::Episode;
  throw ConfigError("schedule.clock", "expected step or episode, got '" + std::string(name) + "'");
}

double Schedule::default_param(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Exponential: return 0.9999;
    case ScheduleKind::Linear: return 25000.0;
    case ScheduleKind::Logarithmic: return 10.0;
    case ScheduleKind::Inverse: return 3.0 / 1000.0;
    case ScheduleKind::Sinusoidal: return 0.9999;
    case ScheduleKind::Constant: return 1.0;
  }
  return 0.0;
}

double epsilon_at(const Schedule& s, std::int64_t t) {
  require(t >= 0, "epsilon_at: negative step counter");
  const double td = static_cast<double>(t);
  double eps = 0.0;
  switch (s.kind) {
    case ScheduleKind::Exponential:
      eps = std::pow(s.param, td);
      break;
    case ScheduleKind::Linear:
      eps = std::max(0.0, 1.0 - td / s.param);
      break;
    case ScheduleKind::Logarithmic:
      eps = std::max(0.0, 1.0 - std::log(td + 1.0) / s.param);
      break;
    case ScheduleKind::Inverse:
      eps = 1.0 / (1.0 + s.param * td);
      break;
    case ScheduleKind::Sinusoidal:
      eps = std::pow(s.param, td) * std::abs(std::sin(0.5 * td));
      break;
    case ScheduleKind::Constant:
      eps = s.param;
      break;
  }
  return std::clamp(eps, std::clamp(s.floor, 0.0, 1.0), 1.0);
}

int argmax_random_tie(std::span<const double> values, Rng& rng) {
  require(!values.empty(), "argmax: empty value sequence");
  const double best = *std::max_element(values.begin(), values.end());
  int ties = 0;
  for (double v : values) ties += (v == best);
  if (ties == 1) {
    return static_cast<int>(std::find(values.begin(), values.end(), best) - values.begin());
  }
  auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(ties)));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == best && pick-- == 0) return static_cast<int>(i);
  }
  return 0;  // unreachable
}

ExplorationDecision select_action(std::span<const double> q_values, double epsilon, Rng& rng) {
  require(!q_values.empty(), "select_action: empty q_values");
  require(q_values.size() <= kNumActions, "select_action: more q_values than actions");
  require(epsilon >= 0.0 && epsilon <= 1.0, "select_action: epsilon outside [0,1]");
  ExplorationDecision d;
  if (rng.uniform() < epsilon) {
    d.explore = true;
    d.chosen_action = action_from_index(static_cast<int>(rng.below(q_values.size())));
  } else {
    d.chosen_action = action_from_index(argmax_random_tie(q_values, rng));
  }
  return d;
}

}  // namespace polecart
