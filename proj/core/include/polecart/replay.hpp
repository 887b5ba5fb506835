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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polecart/env_cartpole.hpp"
#include "polecart/rng.hpp"
#include "polecart/sum_tree.hpp"

namespace polecart {

struct Transition {
  Observation state{};
  Action action = Action::Left;
  double reward = 0.0;
  Observation next_state{};
  bool terminal = false;  // bootstrap is masked when set

  friend bool operator==(const Transition&, const Transition&) = default;
};

enum class ReplayStrategy { None, Uniform, Prioritized };

std::string_view to_string(ReplayStrategy s);
ReplayStrategy replay_strategy_from_string(std::string_view name);

struct SampledBatch {
  std::vector<Transition> transitions;
  std::vector<std::size_t> indices;  // buffer slots
  std::vector<double> is_weights;

  std::size_t size() const { return transitions.size(); }
};

struct ReplayOptions {
  ReplayStrategy strategy = ReplayStrategy::Uniform;
  std::size_t capacity = 10000;
  double priority_alpha = 0.6;    // exponent applied to |td| + priority_eps
  double priority_eps = 1e-5;
};

// Fixed-capacity FIFO ring of transitions with the three sampling strategies.
// None keeps only the newest transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(ReplayOptions options = {});

  void push(const Transition& t);

  // Uniform: n draws with replacement. Prioritized: one draw from each of n
  // equal slices of the total priority mass; weights
  // ((1/size) * (1/P(i)))^beta divided by the batch maximum. None: the
  // newest transition n times. Throws EmptyBuffer when nothing is stored.
  SampledBatch sample(std::size_t n, Rng& rng, double beta = 1.0) const;

  // Sets leaf i to (|td_i| + priority_eps)^priority_alpha. Prioritized only.
  void update_priorities(std::span<const std::size_t> indices, std::span<const double> td_errors);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return storage_.size(); }
  std::uint64_t total_pushed() const { return total_pushed_; }
  bool empty() const { return size_ == 0; }
  ReplayStrategy strategy() const { return options_.strategy; }
  const ReplayOptions& options() const { return options_; }

  // Slot of the i-th oldest stored transition.
  std::size_t slot_of_age(std::size_t i) const;
  const Transition& at_slot(std::size_t slot) const { return storage_[slot]; }

  // Prioritized only.
  double priority(std::size_t slot) const;
  double probability(std::size_t slot) const;
  const SumTree& tree() const;

 private:
  double priority_value(double td_error) const;

  ReplayOptions options_;
  std::vector<Transition> storage_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  std::uint64_t total_pushed_ = 0;
  std::optional<SumTree> tree_;
};

// min(1, beta0 + (1 - beta0) * t / t_final)
double anneal_beta(double beta0, std::int64_t t, std::int64_t t_final);

}  // namespace polecart
