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

#include "polecart/dqn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "polecart/error.hpp"

namespace polecart {

std::vector<double> compute_targets(const MlpParams& target_net, const SampledBatch& batch,
                                    double gamma) {
  require(gamma > 0.0 && gamma <= 1.0, "compute_targets: gamma outside (0,1]");
  std::vector<double> targets;
  targets.reserve(batch.size());
  ForwardCache cache;
  for (const auto& t : batch.transitions) {
    if (t.terminal) {
      targets.push_back(t.reward);
      continue;
    }
    auto q = cache.run(target_net, t.next_state);
    targets.push_back(t.reward + gamma * *std::max_element(q.begin(), q.end()));
  }
  return targets;
}

LossReport compute_loss_and_gradient(const MlpParams& policy_net, const MlpParams& target_net,
                                     const SampledBatch& batch, double gamma, Gradient& grad) {
  require(batch.size() > 0, "learn_step: empty batch");
  require(batch.is_weights.size() == batch.size(), "learn_step: weight count mismatch");
  const auto targets = compute_targets(target_net, batch, gamma);
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  LossReport report;
  report.td_errors.reserve(batch.size());
  ForwardCache cache;
  std::vector<double> upstream(policy_net.layers.back().out, 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& t = batch.transitions[i];
    const int a = to_index(t.action);
    const auto q = cache.run(policy_net, t.state);
    const double td = targets[i] - q[static_cast<std::size_t>(a)];
    const double w = batch.is_weights[i];
    report.td_errors.push_back(td);
    report.weighted_loss += inv_n * w * td * td;
    // d/dq_a of (1/N) w (target - q_a)^2
    std::fill(upstream.begin(), upstream.end(), 0.0);
    upstream[static_cast<std::size_t>(a)] = -2.0 * inv_n * w * td;
    cache.accumulate_backward(policy_net, upstream, grad);
  }
  return report;
}

DqnAgent::DqnAgent(DqnOptions options, Rng& init_rng)
    : options_(std::move(options)),
      policy_net_(mlp_init(options_.layer_widths, init_rng)),
      target_net_(policy_net_),
      buffer_(options_.replay),
      grad_(Gradient::zeros_like(policy_net_)) {
  require(options_.target_sync_every >= 1, "DqnAgent: target_sync_every must be >= 1");
  require(options_.batch_size >= 1, "DqnAgent: batch_size must be >= 1");
  require(options_.lr > 0.0, "DqnAgent: lr must be positive");
}

LossReport DqnAgent::learn_step(const SampledBatch& batch, double lr) {
  for (auto& l : grad_.layers) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  LossReport report =
      compute_loss_and_gradient(policy_net_, target_net_, batch, options_.gamma, grad_);
  if (!std::isfinite(report.weighted_loss) || !grad_.all_finite()) {
    throw TrainingAborted("learn_step: non-finite loss " + std::to_string(report.weighted_loss) +
                          " at global step " + std::to_string(global_step_));
  }
  optimizer_step(policy_net_, grad_, lr, options_.optimizer);
  ++learn_steps_;
  return report;
}

bool DqnAgent::advance_step() {
  ++global_step_;
  if (global_step_ % options_.target_sync_every == 0) {
    sync_target();
    ++sync_count_;
    return true;
  }
  return false;
}

std::size_t DqnAgent::effective_batch_size() const {
  return buffer_.strategy() == ReplayStrategy::None ? 1 : options_.batch_size;
}

bool DqnAgent::ready_to_learn() const {
  const std::uint64_t needed =
      std::max<std::uint64_t>(effective_batch_size(), options_.warmup);
  return !buffer_.empty() && buffer_.total_pushed() >= needed;
}

std::vector<EpisodeRecord> DqnAgent::train(CartPole& env, const Schedule& schedule, int episodes,
                                           Rng& rng) {
  require(episodes >= 1, "train_dqn: episodes must be >= 1");
  using Clock = std::chrono::steady_clock;
  const bool prioritized = buffer_.strategy() == ReplayStrategy::Prioritized;
  const std::int64_t beta_horizon =
      options_.beta_steps > 0
          ? options_.beta_steps
          : std::max<std::int64_t>(1, static_cast<std::int64_t>(episodes) * env.params().max_steps);

  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(episodes));
  ForwardCache act_cache;
  double eps = epsilon_at(schedule, global_step_);

  for (int ep = 0; ep < episodes; ++ep) {
    const auto start = Clock::now();
    Observation obs = observe(env.reset(rng));
    EpisodeRecord rec;
    rec.episode = ep;
    while (!env.done()) {
      eps = epsilon_at(schedule, options_.clock == EpsilonClock::Step ? global_step_ : ep);
      const auto q = act_cache.run(policy_net_, obs);
      const auto decision = select_action(q, eps, rng);
      const auto out = env.step(decision.chosen_action);
      const Observation next_obs = observe(out.next_state);
      buffer_.push(Transition{obs, decision.chosen_action, out.reward, next_obs, out.terminated});

      if (ready_to_learn()) {
        const double beta = prioritized ? anneal_beta(options_.beta0, global_step_, beta_horizon) : 1.0;
        const auto batch = buffer_.sample(effective_batch_size(), rng, beta);
        const auto report = learn_step(batch, options_.lr);
        if (prioritized) buffer_.update_priorities(batch.indices, report.td_errors);
      }
      advance_step();

      obs = next_obs;
      rec.episode_return += out.reward;
      ++rec.length;
    }
    rec.epsilon_at_end = eps;
    rec.global_step_at_end = global_step_;
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    records.push_back(rec);
  }
  return records;
}

}  // namespace polecart
