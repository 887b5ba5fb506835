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

#include "polecart/tabular_q.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "polecart/error.hpp"

namespace polecart {

Discretizer::Discretizer() : Discretizer(kDefaultBins, kDefaultRanges) {}

Discretizer::Discretizer(std::array<int, 4> bins, std::array<Interval, 4> ranges)
    : bins_(bins), ranges_(ranges), num_states_(1) {
  for (int i = 0; i < 4; ++i) {
    require(bins_[i] > 0, "Discretizer: bin count must be positive");
    require(ranges_[i].hi > ranges_[i].lo, "Discretizer: empty range");
    num_states_ *= static_cast<std::size_t>(bins_[i]);
  }
}

std::size_t Discretizer::index(const CartState& s) const {
  const std::array<double, 4> c = {s.x, s.v, s.theta, s.omega};
  std::size_t idx = 0;
  for (int i = 0; i < 4; ++i) {
    const auto [lo, hi] = ranges_[i];
    const double clipped = std::clamp(c[i], lo, hi);
    auto cell = static_cast<long>(std::floor(bins_[i] * (clipped - lo) / (hi - lo)));
    cell = std::clamp<long>(cell, 0, bins_[i] - 1);
    idx = idx * static_cast<std::size_t>(bins_[i]) + static_cast<std::size_t>(cell);
  }
  return idx;
}

QTable::QTable(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states), num_actions_(num_actions), values_(num_states * num_actions, 0.0) {
  require(num_states > 0 && num_actions > 0, "QTable: empty shape");
}

double QTable::max_value(std::size_t s) const {
  auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

void q_update(QTable& table, std::size_t s, std::size_t a, double r, std::size_t s_next,
              bool terminal, double alpha, double gamma) {
  require(alpha > 0.0 && alpha <= 1.0, "q_update: alpha outside (0,1]");
  require(gamma >= 0.0 && gamma <= 1.0, "q_update: gamma outside [0,1]");
  const double bootstrap = terminal ? 0.0 : gamma * table.max_value(s_next);
  double& q = table.at(s, a);
  q += alpha * (r + bootstrap - q);
}

TabularResult train_tabular(CartPole& env, const Schedule& schedule, int episodes,
                            const TabularOptions& opt, Rng& rng) {
  require(episodes >= 1, "train_tabular: episodes must be >= 1");
  using Clock = std::chrono::steady_clock;

  TabularResult result{QTable(opt.discretizer.num_states(), kNumActions), {}};
  result.records.reserve(static_cast<std::size_t>(episodes));
  std::int64_t global_step = 0;
  double eps = epsilon_at(schedule, 0);

  for (int ep = 0; ep < episodes; ++ep) {
    const auto start = Clock::now();
    std::size_t s = opt.discretizer.index(env.reset(rng));
    EpisodeRecord rec;
    rec.episode = ep;
    while (!env.done()) {
      eps = epsilon_at(schedule, opt.clock == EpsilonClock::Step ? global_step : ep);
      const auto decision = select_action(result.table.row(s), eps, rng);
      const auto out = env.step(decision.chosen_action);
      const std::size_t s_next = opt.discretizer.index(out.next_state);
      // Truncation is not a true terminal state; keep bootstrapping through it.
      q_update(result.table, s, static_cast<std::size_t>(to_index(decision.chosen_action)),
               out.reward, s_next, out.terminated, opt.alpha, opt.gamma);
      s = s_next;
      rec.episode_return += out.reward;
      ++rec.length;
      ++global_step;
    }
    rec.epsilon_at_end = eps;
    rec.global_step_at_end = global_step;
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace polecart
