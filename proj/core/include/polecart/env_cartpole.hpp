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

#include "polecart/rng.hpp"

namespace polecart {

enum class Action : std::uint8_t { Left = 0, Right = 1 };

inline constexpr int kNumActions = 2;
inline constexpr int kObservationSize = 4;

constexpr Action action_from_index(int i) { return i == 0 ? Action::Left : Action::Right; }
constexpr int to_index(Action a) { return static_cast<int>(a); }

using Observation = std::array<double, kObservationSize>;

struct CartState {
  double x = 0.0;      // cart position, m
  double v = 0.0;      // cart velocity, m/s
  double theta = 0.0;  // pole angle, rad
  double omega = 0.0;  // pole angular velocity, rad/s

  friend bool operator==(const CartState&, const CartState&) = default;
};

struct StepOutcome {
  CartState next_state;
  double reward = 0.0;
  bool terminated = false;  // position or angle limit breached
  bool truncated = false;   // step limit reached

  bool done() const { return terminated || truncated; }
};

struct CartPoleParams {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;
  double force = 10.0;
  double tau = 0.02;
  double x_limit = 2.4;
  double theta_limit = 0.2095;
  int max_steps = 500;
  // false: the step that breaks a limit pays 0. true: it pays 1, as in the
  // Gymnasium reference implementation.
  bool reward_on_termination = false;
};

// Builds an initial state from four uniforms on (0, 1), mapping each onto
// (-0.05, 0.05).
CartState initial_state_from_uniforms(const std::array<double, 4>& u);

// One Euler step of the classic cart-pole equations. `t` is the number of
// steps already taken this episode. Throws ContractViolation when `state` is
// already outside the limits or `t` exceeds max_steps.
StepOutcome step_dynamics(const CartState& state, Action action, int t,
                          const CartPoleParams& params = {});

bool is_terminal(const CartState& s, const CartPoleParams& params = {});

Observation observe(const CartState& s);

// Stateful wrapper tracking the current state and episode step counter.
class CartPole {
 public:
  explicit CartPole(CartPoleParams params = {}) : params_(params) {}

  CartState reset(Rng& rng);
  StepOutcome step(Action action);

  const CartState& state() const { return state_; }
  int elapsed_steps() const { return steps_; }
  bool done() const { return done_; }
  const CartPoleParams& params() const { return params_; }

 private:
  CartPoleParams params_;
  CartState state_{};
  int steps_ = 0;
  bool done_ = true;
};

}  // namespace polecart
