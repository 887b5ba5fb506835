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

#include "polecart/env_cartpole.hpp"

#include <cmath>

#include "polecart/error.hpp"

namespace polecart {

CartState initial_state_from_uniforms(const std::array<double, 4>& u) {
  auto map = [](double w) { return -0.05 + 0.1 * w; };
  return {map(u[0]), map(u[1]), map(u[2]), map(u[3])};
}

bool is_terminal(const CartState& s, const CartPoleParams& p) {
  return std::abs(s.x) > p.x_limit || std::abs(s.theta) > p.theta_limit;
}

StepOutcome step_dynamics(const CartState& s, Action action, int t,
                          const CartPoleParams& p) {
  require(!is_terminal(s, p), "step_dynamics: state is already terminal");
  require(t >= 0 && t <= p.max_steps, "step_dynamics: step counter out of range");

  const double force = action == Action::Right ? p.force : -p.force;
  const double total_mass = p.cart_mass + p.pole_mass;
  const double polemass_length = p.pole_mass * p.half_length;
  const double cos_t = std::cos(s.theta);
  const double sin_t = std::sin(s.theta);

  const double temp = (force + polemass_length * s.omega * s.omega * sin_t) / total_mass;
  const double theta_acc =
      (p.gravity * sin_t - cos_t * temp) /
      (p.half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

  StepOutcome out;
  out.next_state.x = s.x + p.tau * s.v;
  out.next_state.v = s.v + p.tau * x_acc;
  out.next_state.theta = s.theta + p.tau * s.omega;
  out.next_state.omega = s.omega + p.tau * theta_acc;

  out.terminated = is_terminal(out.next_state, p);
  out.truncated = t + 1 >= p.max_steps;
  out.reward = (out.terminated && !p.reward_on_termination) ? 0.0 : 1.0;
  return out;
}

Observation observe(const CartState& s) { return {s.x, s.v, s.theta, s.omega}; }

CartState CartPole::reset(Rng& rng) {
  std::array<double, 4> u{};
  for (auto& w : u) w = rng.uniform_open();
  state_ = initial_state_from_uniforms(u);
  steps_ = 0;
  done_ = false;
  return state_;
}

StepOutcome CartPole::step(Action action) {
  require(!done_, "CartPole::step: episode is over, call reset()");
  StepOutcome out = step_dynamics(state_, action, steps_, params_);
  state_ = out.next_state;
  ++steps_;
  done_ = out.done();
  return out;
}

}  // namespace polecart
