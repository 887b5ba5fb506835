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

#include "polecart/replay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "polecart/error.hpp"

namespace polecart {

namespace {
constexpr std::array<std::string_view, 3> kStrategyNames = {"none", "uniform", "prioritized"};
}

std::string_view to_string(ReplayStrategy s) { return kStrategyNames[static_cast<int>(s)]; }

ReplayStrategy replay_strategy_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kStrategyNames.size(); ++i) {
    if (kStrategyNames[i] == name) return static_cast<ReplayStrategy>(i);
  }
  throw ConfigError("replay.strategy", "unknown strategy '" + std::string(name) + "'");
}

ReplayBuffer::ReplayBuffer(ReplayOptions options) : options_(options) {
  require(options_.capacity > 0, "ReplayBuffer: capacity must be positive");
  require(options_.priority_alpha >= 0.0, "ReplayBuffer: priority_alpha must be >= 0");
  require(options_.priority_eps > 0.0, "ReplayBuffer: priority_eps must be > 0");
  const std::size_t slots = options_.strategy == ReplayStrategy::None ? 1 : options_.capacity;
  storage_.resize(slots);
  if (options_.strategy == ReplayStrategy::Prioritized) tree_.emplace(slots);
}

void ReplayBuffer::push(const Transition& t) {
  const std::size_t slot = cursor_;
  storage_[slot] = t;
  if (tree_) {
    const double p = size_ == 0 ? 1.0 : tree_->max_leaf();
    tree_->set(slot, p);
  }
  cursor_ = (cursor_ + 1) % storage_.size();
  size_ = std::min(size_ + 1, storage_.size());
  ++total_pushed_;
}

std::size_t ReplayBuffer::slot_of_age(std::size_t i) const {
  require(i < size_, "ReplayBuffer::slot_of_age: out of range");
  const std::size_t oldest = size_ < storage_.size() ? 0 : cursor_;
  return (oldest + i) % storage_.size();
}

SampledBatch ReplayBuffer::sample(std::size_t n, Rng& rng, double beta) const {
  if (size_ == 0) throw EmptyBuffer("ReplayBuffer::sample: buffer is empty");
  require(n >= 1, "ReplayBuffer::sample: n must be >= 1");
  require(beta >= 0.0 && beta <= 1.0, "ReplayBuffer::sample: beta outside [0,1]");

  SampledBatch batch;
  batch.transitions.reserve(n);
  batch.indices.reserve(n);
  batch.is_weights.reserve(n);

  switch (options_.strategy) {
    case ReplayStrategy::None: {
      const std::size_t slot = slot_of_age(size_ - 1);
      for (std::size_t i = 0; i < n; ++i) {
        batch.indices.push_back(slot);
        batch.transitions.push_back(storage_[slot]);
        batch.is_weights.push_back(1.0);
      }
      break;
    }
    case ReplayStrategy::Uniform: {
      for (std::size_t i = 0; i < n; ++i) {
        const auto slot = static_cast<std::size_t>(rng.below(size_));
        batch.indices.push_back(slot);
        batch.transitions.push_back(storage_[slot]);
        batch.is_weights.push_back(1.0);
      }
      break;
    }
    case ReplayStrategy::Prioritized: {
      const double total = tree_->total();
      const double segment = total / static_cast<double>(n);
      double max_w = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = segment * (static_cast<double>(i) + rng.uniform());
        const std::size_t slot = tree_->find(std::min(u, std::nextafter(total, 0.0)));
        const double prob = tree_->get(slot) / total;
        const double w = std::pow(1.0 / (static_cast<double>(size_) * prob), beta);
        max_w = std::max(max_w, w);
        batch.indices.push_back(slot);
        batch.transitions.push_back(storage_[slot]);
        batch.is_weights.push_back(w);
      }
      for (auto& w : batch.is_weights) w /= max_w;
      break;
    }
  }
  return batch;
}

double ReplayBuffer::priority_value(double td_error) const {
  return std::pow(std::abs(td_error) + options_.priority_eps, options_.priority_alpha);
}

void ReplayBuffer::update_priorities(std::span<const std::size_t> indices,
                                     std::span<const double> td_errors) {
  require(tree_.has_value(), "update_priorities: buffer is not prioritized");
  require(indices.size() == td_errors.size(), "update_priorities: length mismatch");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] < size_, "update_priorities: index out of range");
    require(std::isfinite(td_errors[i]), "update_priorities: non-finite td error");
    tree_->set(indices[i], priority_value(td_errors[i]));
  }
}

double ReplayBuffer::priority(std::size_t slot) const { return tree().get(slot); }

double ReplayBuffer::probability(std::size_t slot) const {
  return tree().get(slot) / tree().total();
}

const SumTree& ReplayBuffer::tree() const {
  require(tree_.has_value(), "ReplayBuffer: buffer is not prioritized");
  return *tree_;
}

double anneal_beta(double beta0, std::int64_t t, std::int64_t t_final) {
  require(beta0 > 0.0 && beta0 <= 1.0, "anneal_beta: beta0 outside (0,1]");
  require(t_final >= 1, "anneal_beta: t_final must be >= 1");
  require(t >= 0, "anneal_beta: negative step");
  return std::min(1.0, beta0 + (1.0 - beta0) * static_cast<double>(t) / static_cast<double>(t_final));
}

}  // namespace polecart
