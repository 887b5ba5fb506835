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

#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "polecart/error.hpp"
#include "polecart/schedules.hpp"

using namespace polecart;

namespace {
const std::array<Schedule, 5> kDecaySchedules = {Schedule::exponential(), Schedule::linear(),
                                                 Schedule::logarithmic(), Schedule::inverse(),
                                                 Schedule::sinusoidal()};
}

TEST_CASE("schedule values at known points") {
  CHECK(epsilon_at(Schedule::exponential(0.9999), 0) == 1.0);
  CHECK(epsilon_at(Schedule::exponential(0.9999), 10000) == doctest::Approx(std::exp(10000 * std::log(0.9999))));
  CHECK(epsilon_at(Schedule::linear(), 25000) == 0.0);
  CHECK(epsilon_at(Schedule::linear(), 12500) == doctest::Approx(0.5));
  CHECK(epsilon_at(Schedule::linear(), 30000) == 0.0);
  CHECK(epsilon_at(Schedule::inverse(), 1000) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(epsilon_at(Schedule::sinusoidal(), 0) == 0.0);
  CHECK(epsilon_at(Schedule::sinusoidal(), 3) ==
        doctest::Approx(std::pow(0.9999, 3) * std::abs(std::sin(1.5))));
  CHECK(epsilon_at(Schedule::constant(0.3), 123456) == 0.3);
}

TEST_CASE("logarithmic schedule first reaches zero just past e^10 - 1") {
  // 1 - ln(t+1)/10 <= 0  <=>  t >= e^10 - 1 = 22025.47
  const auto log_sched = Schedule::logarithmic();
  CHECK(epsilon_at(log_sched, 22025) > 0.0);
  CHECK(epsilon_at(log_sched, 22025) < 1e-5);
  CHECK(epsilon_at(log_sched, 22026) == 0.0);
  CHECK(epsilon_at(log_sched, 0) == 1.0);
}

TEST_CASE("negative t is rejected") {
  for (const auto& s : kDecaySchedules) CHECK_THROWS_AS(epsilon_at(s, -1), ContractViolation);
}

TEST_CASE("floor clamps from below") {
  Schedule s = Schedule::linear();
  s.floor = 0.05;
  CHECK(epsilon_at(s, 0) == 1.0);
  CHECK(epsilon_at(s, 100000) == 0.05);
}

TEST_CASE("range and monotonicity over t = 0..1e6") {
  for (const auto& s : kDecaySchedules) {
    CAPTURE(to_string(s.kind));
    double prev = 2.0;
    const bool monotone = s.kind != ScheduleKind::Sinusoidal;
    for (std::int64_t t = 0; t <= 1'000'000; t += 97) {
      const double e = epsilon_at(s, t);
      REQUIRE(e >= 0.0);
      REQUIRE(e <= 1.0);
      if (monotone) REQUIRE(e <= prev);
      prev = e;
    }
  }
}

TEST_CASE("non-sinusoidal schedules become greedy in the limit") {
  for (const auto& s : kDecaySchedules) {
    if (s.kind == ScheduleKind::Sinusoidal) continue;
    CAPTURE(to_string(s.kind));
    std::int64_t last_above = -1;
    for (std::int64_t t = 0; t <= 1'000'000; t += 97) {
      if (epsilon_at(s, t) >= 0.01) last_above = t;
    }
    CHECK(last_above < 1'000'000 - 97);
  }
}

TEST_CASE("schedule kinds round-trip through their names") {
  for (auto k : {ScheduleKind::Exponential, ScheduleKind::Linear, ScheduleKind::Logarithmic,
                 ScheduleKind::Inverse, ScheduleKind::Sinusoidal, ScheduleKind::Constant}) {
    CHECK(schedule_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(schedule_kind_from_string("cosine"), ConfigError);
}

TEST_CASE("select_action with epsilon 0 exploits") {
  const std::vector<double> q = {0.2, 0.7};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto d = select_action(q, 0.0, rng);
    CHECK(d.chosen_action == Action::Right);
    CHECK_FALSE(d.explore);
  }
}

TEST_CASE("select_action with epsilon 1 is uniform") {
  Rng rng(3);
  const std::vector<double> q = {5.0, -1.0};
  int right = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto d = select_action(q, 1.0, rng);
    REQUIRE(d.explore);
    right += d.chosen_action == Action::Right;
  }
  CHECK(std::abs(right / double(n) - 0.5) < 0.01);
}

TEST_CASE("ties are broken uniformly") {
  Rng rng(4);
  const std::vector<double> q = {0.5, 0.5};
  int right = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) right += select_action(q, 0.0, rng).chosen_action == Action::Right;
  CHECK(std::abs(right / double(n) - 0.5) < 0.01);
}

TEST_CASE("greedy choice is invariant to positive scaling of q") {
  Rng gen(8);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> q = {gen.uniform(-1, 1), gen.uniform(-1, 1)};
    const double c = gen.uniform(0.01, 100.0);
    const std::vector<double> scaled = {q[0] * c, q[1] * c};
    Rng a(i), b(i);
    CHECK(select_action(q, 0.0, a).chosen_action == select_action(scaled, 0.0, b).chosen_action);
  }
}

TEST_CASE("select_action rejects bad input") {
  Rng rng(0);
  CHECK_THROWS_AS(select_action(std::vector<double>{}, 0.1, rng), ContractViolation);
  CHECK_THROWS_AS(select_action(std::vector<double>{1, 2}, 1.5, rng), ContractViolation);
}
