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

#include <algorithm>
#include <array>
#include <cmath>

#include "doctest.h"
#include "polecart/error.hpp"
#include "polecart/tabular_q.hpp"

using namespace polecart;

namespace {

// Deterministic 3-state, 2-action chain. Action 1 moves right, action 0 moves
// left; taking action 1 in the last state pays 1 and stays there.
struct Chain {
  static constexpr int kStates = 3;
  static constexpr int kActions = 2;
  static int next(int s, int a) { return a == 1 ? std::min(s + 1, 2) : std::max(s - 1, 0); }
  static double reward(int s, int a) { return (s == 2 && a == 1) ? 1.0 : 0.0; }
};

// Value iteration on the chain, independent of q_update.
std::array<std::array<double, 2>, 3> value_iteration(double gamma) {
  std::array<std::array<double, 2>, 3> q{};
  for (int iter = 0; iter < 100000; ++iter) {
    auto nq = q;
    double delta = 0.0;
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        const int sn = Chain::next(s, a);
        nq[s][a] = Chain::reward(s, a) + gamma * std::max(q[sn][0], q[sn][1]);
        delta = std::max(delta, std::abs(nq[s][a] - q[s][a]));
      }
    }
    q = nq;
    if (delta == 0.0) break;
  }
  return q;
}

}  // namespace

TEST_CASE("discretize corners and centre") {
  Discretizer d;
  CHECK(d.num_states() == 8 * 8 * 12 * 12);
  CHECK(d.index({-2.4, -3.0, -0.2095, -3.5}) == 0);
  CHECK(d.index({2.4, 3.0, 0.2095, 3.5}) == d.num_states() - 1);
  // Cells at the origin: x 4, v 4, theta 6, omega 6 -> ((4*8 + 4)*12 + 6)*12 + 6.
  CHECK(d.index({0, 0, 0, 0}) == 5262);
  // Out-of-range values clip to the edge cells.
  CHECK(d.index({-100, -100, -100, -100}) == 0);
  CHECK(d.index({100, 100, 100, 100}) == d.num_states() - 1);
}

TEST_CASE("states equal after clipping share an index") {
  Discretizer d;
  CHECK(d.index({5.0, 0.1, 0.0, 0.0}) == d.index({2.4, 0.1, 0.0, 0.0}));
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const CartState s{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-1, 1), rng.uniform(-10, 10)};
    REQUIRE(d.index(s) < d.num_states());
  }
}

TEST_CASE("discretizer rejects degenerate shapes") {
  CHECK_THROWS_AS(Discretizer({0, 1, 1, 1}, Discretizer::kDefaultRanges), ContractViolation);
  CHECK_THROWS_AS(Discretizer({1, 1, 1, 1}, {Interval{1, 1}, Interval{0, 1}, Interval{0, 1}, Interval{0, 1}}),
                  ContractViolation);
}

TEST_CASE("q_update worked examples") {
  QTable t(4, 2);
  q_update(t, 0, 1, 1.0, 1, false, 1.0, 0.0);
  CHECK(t.at(0, 1) == 1.0);

  QTable u(4, 2);
  u.at(2, 0) = 2.0;
  q_update(u, 1, 0, 1.0, 2, false, 0.5, 0.9);
  CHECK(u.at(1, 0) == doctest::Approx(1.4).epsilon(1e-15));

  QTable v(4, 2);
  v.at(3, 0) = 7.0;
  v.at(0, 0) = 5.0;
  q_update(v, 0, 0, 0.0, 3, true, 1.0, 0.9);
  CHECK(v.at(0, 0) == 0.0);
}

TEST_CASE("fresh table is zero and updates touch one cell") {
  QTable t(50, 2);
  CHECK(std::all_of(t.values().begin(), t.values().end(), [](double x) { return x == 0.0; }));
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto before = t.values();
    const std::size_t s = rng.below(50), a = rng.below(2), sn = rng.below(50);
    q_update(t, s, a, static_cast<double>(rng.below(2)), sn, rng.below(2) == 1, 0.3, 0.9);
    for (std::size_t k = 0; k < before.size(); ++k) {
      if (k != s * 2 + a) REQUIRE(t.values()[k] == before[k]);
    }
  }
}

TEST_CASE("q_update sweeps converge to the value-iteration fixed point") {
  const double gamma = 0.9;
  const auto oracle = value_iteration(gamma);
  QTable t(3, 2);
  for (int sweep = 0; sweep < 2000; ++sweep) {
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        q_update(t, s, a, Chain::reward(s, a), Chain::next(s, a), false, 1.0, gamma);
      }
    }
  }
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 2; ++a) CHECK(std::abs(t.at(s, a) - oracle[s][a]) < 1e-9);
  }
  CHECK(oracle[2][1] == doctest::Approx(10.0));
}

TEST_CASE("Q stays within [0, 1/(1-gamma)] for rewards in [0,1]") {
  const double gamma = 0.9;
  QTable t(20, 2);
  Rng rng(3);
  for (int i = 0; i < 200000; ++i) {
    q_update(t, rng.below(20), rng.below(2), rng.uniform(), rng.below(20), rng.below(10) == 0,
             rng.uniform(0.01, 1.0), gamma);
  }
  for (double x : t.values()) {
    REQUIRE(std::isfinite(x));
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0 / (1.0 - gamma) + 1e-12);
  }
}

TEST_CASE("train_tabular is reproducible and bookkeeps episodes") {
  auto run = [](int episodes) {
    CartPole env;
    Rng rng(17);
    return train_tabular(env, Schedule::exponential(), episodes, TabularOptions{}, rng);
  };
  const auto a = run(1);
  const auto b = run(1);
  REQUIRE(a.records.size() == 1);
  CHECK(a.records[0].episode_return == b.records[0].episode_return);
  CHECK(a.records[0].length == b.records[0].length);
  CHECK(a.table.values() == b.table.values());

  const auto many = run(200);
  std::int64_t steps = 0;
  for (std::size_t i = 0; i < many.records.size(); ++i) {
    const auto& r = many.records[i];
    CHECK(r.episode == static_cast<std::int64_t>(i));
    steps += r.length;
    CHECK(r.global_step_at_end == steps);
    CHECK(r.episode_return >= r.length - 1);
    CHECK(r.episode_return <= r.length);
  }
  CHECK_THROWS_AS(run(0), ContractViolation);
}

TEST_CASE("tabular learning improves over a few thousand episodes") {
  CartPole env;
  Rng rng(23);
  TabularOptions opt;
  opt.clock = EpsilonClock::Episode;
  const auto res = train_tabular(env, Schedule::exponential(0.999), 3000, opt, rng);
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 500; ++i) {
    first += res.records[i].episode_return;
    last += res.records[res.records.size() - 1 - i].episode_return;
  }
  CHECK(last > first);
}
