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
#include <vector>

#include "polecart/env_cartpole.hpp"
#include "polecart/episode.hpp"
#include "polecart/mlp.hpp"
#include "polecart/replay.hpp"
#include "polecart/rng.hpp"
#include "polecart/schedules.hpp"

namespace polecart {

struct DqnOptions {
  std::vector<std::size_t> layer_widths = {4, 8, 8, 2};
  double gamma = 0.99;
  double lr = 1e-3;
  OptimizerConfig optimizer;
  std::int64_t target_sync_every = 100;
  std::size_t batch_size = 64;
  std::uint64_t warmup = 500;
  ReplayOptions replay;
  double beta0 = 0.4;
  // Steps over which beta is annealed to 1; 0 means episodes * max_steps.
  std::int64_t beta_steps = 0;
  EpsilonClock clock = EpsilonClock::Step;
};

struct LossReport {
  std::vector<double> td_errors;  // target - prediction, per sample
  double weighted_loss = 0.0;     // (1/N) sum w_i * td_i^2
};

// r + gamma * max_a q_target(s', a), or r alone for terminal transitions.
std::vector<double> compute_targets(const MlpParams& target_net, const SampledBatch& batch,
                                    double gamma);

// Loss and its gradient with respect to the policy network only; targets come
// from `target_net` and are treated as constants.
LossReport compute_loss_and_gradient(const MlpParams& policy_net, const MlpParams& target_net,
                                     const SampledBatch& batch, double gamma, Gradient& grad);

class DqnAgent {
 public:
  DqnAgent(DqnOptions options, Rng& init_rng);

  // One optimizer step on `batch`. Throws TrainingAborted on a non-finite loss.
  LossReport learn_step(const SampledBatch& batch, double lr);
  void sync_target() { target_net_ = clone_params(policy_net_); }

  // Advances the global step counter and syncs the target network whenever
  // the counter hits a multiple of target_sync_every. Returns true on sync.
  bool advance_step();

  // Episodes must be >= 1. `rng` drives resets, exploration and sampling.
  std::vector<EpisodeRecord> train(CartPole& env, const Schedule& schedule, int episodes, Rng& rng);

  // True once enough transitions have been seen for learning to start.
  bool ready_to_learn() const;
  std::size_t effective_batch_size() const;

  const MlpParams& policy_net() const { return policy_net_; }
  const MlpParams& target_net() const { return target_net_; }
  MlpParams& mutable_policy_net() { return policy_net_; }
  MlpParams& mutable_target_net() { return target_net_; }
  ReplayBuffer& buffer() { return buffer_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const DqnOptions& options() const { return options_; }
  std::int64_t global_step() const { return global_step_; }
  std::int64_t learn_steps() const { return learn_steps_; }
  std::int64_t sync_count() const { return sync_count_; }

 private:
  DqnOptions options_;
  MlpParams policy_net_;
  MlpParams target_net_;
  ReplayBuffer buffer_;
  Gradient grad_;
  std::int64_t global_step_ = 0;
  std::int64_t learn_steps_ = 0;
  std::int64_t sync_count_ = 0;
};

// Convenience wrapper: builds nothing, just runs `agent.train`.
inline std::vector<EpisodeRecord> train_dqn(CartPole& env, DqnAgent& agent, const Schedule& schedule,
                                            int episodes, Rng& rng) {
  return agent.train(env, schedule, episodes, rng);
}

}  // namespace polecart
