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
#include <cstddef>
#include <vector>

#include "polecart/env_cartpole.hpp"
#include "polecart/episode.hpp"
#include "polecart/rng.hpp"
#include "polecart/schedules.hpp"

namespace polecart {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Maps a continuous cart state onto a flat cell index: each component is
// clipped to its range, bucketed into `bins` equal cells, and the four cell
// coordinates are combined mixed-radix with x as the most significant digit.
class Discretizer {
 public:
  Discretizer();
  Discretizer(std::array<int, 4> bins, std::array<Interval, 4> ranges);

  std::size_t index(const CartState& s) const;
  std::size_t num_states() const { return num_states_; }

  const std::array<int, 4>& bins() const { return bins_; }
  const std::array<Interval, 4>& ranges() const { return ranges_; }

  static constexpr std::array<int, 4> kDefaultBins = {8, 8, 12, 12};
  static constexpr std::array<Interval, 4> kDefaultRanges = {
      Interval{-2.4, 2.4}, Interval{-3.0, 3.0}, Interval{-0.2095, 0.2095}, Interval{-3.5, 3.5}};

 private:
  std::array<int, 4> bins_;
  std::array<Interval, 4> ranges_;
  std::size_t num_states_;
};

// Dense state x action table of action values, zero-initialised.
class QTable {
 public:
  QTable(std::size_t num_states, std::size_t num_actions);

  double& at(std::size_t s, std::size_t a) { return values_[s * num_actions_ + a]; }
  double at(std::size_t s, std::size_t a) const { return values_[s * num_actions_ + a]; }

  double max_value(std::size_t s) const;
  std::span<const double> row(std::size_t s) const {
    return {values_.data() + s * num_actions_, num_actions_};
  }

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> values_;
};

// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') * [not terminal] - Q(s,a))
void q_update(QTable& table, std::size_t s, std::size_t a, double r, std::size_t s_next,
              bool terminal, double alpha, double gamma);

struct TabularOptions {
  double alpha = 0.1;
  double gamma = 0.99;
  Discretizer discretizer;
  EpsilonClock clock = EpsilonClock::Step;
};

struct TabularResult {
  QTable table;
  std::vector<EpisodeRecord> records;
};

// Epsilon-greedy Q-learning on cart-pole. `rng` drives both episode resets and
// action selection. Epsilon is evaluated on the global step counter, or on the
// episode index when options.clock is Episode.
TabularResult train_tabular(CartPole& env, const Schedule& schedule, int episodes,
                            const TabularOptions& options, Rng& rng);

}  // namespace polecart
