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

#include <benchmark/benchmark.h>

#include <vector>

#include "polecart/dqn.hpp"
#include "polecart/env_cartpole.hpp"
#include "polecart/mlp.hpp"
#include "polecart/replay.hpp"
#include "polecart/rng.hpp"
#include "polecart/sum_tree.hpp"

namespace {

using namespace polecart;

Transition random_transition(Rng& rng) {
  Transition t;
  for (auto& x : t.state) x = rng.uniform(-1, 1);
  for (auto& x : t.next_state) x = rng.uniform(-1, 1);
  t.action = rng.below(2) ? Action::Right : Action::Left;
  t.reward = 1.0;
  t.terminal = rng.below(20) == 0;
  return t;
}

void BM_EnvStep(benchmark::State& state) {
  Rng rng(1);
  CartPole env;
  env.reset(rng);
  for (auto _ : state) {
    if (env.done()) env.reset(rng);
    benchmark::DoNotOptimize(env.step(rng.below(2) ? Action::Right : Action::Left));
  }
}
BENCHMARK(BM_EnvStep);

void BM_SumTreeUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SumTree tree(n);
  Rng rng(2);
  for (auto _ : state) tree.set(rng.below(n), rng.uniform());
}
BENCHMARK(BM_SumTreeUpdate)->Arg(1 << 10)->Arg(10000);

void BM_SumTreeFind(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SumTree tree(n);
  Rng rng(3);
  for (std::size_t i = 0; i < n; ++i) tree.set(i, rng.uniform());
  for (auto _ : state) benchmark::DoNotOptimize(tree.find(rng.uniform() * tree.total()));
}
BENCHMARK(BM_SumTreeFind)->Arg(1 << 10)->Arg(10000);

void BM_MlpForward(benchmark::State& state) {
  Rng rng(4);
  const std::vector<std::size_t> widths = {4, 8, 8, 2};
  const auto params = mlp_init(widths, rng);
  ForwardCache cache;
  const std::vector<double> x = {0.1, -0.2, 0.03, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(cache.run(params, x).data());
}
BENCHMARK(BM_MlpForward);

void BM_MlpForwardBackward(benchmark::State& state) {
  Rng rng(5);
  const std::vector<std::size_t> widths = {4, 8, 8, 2};
  const auto params = mlp_init(widths, rng);
  auto grad = Gradient::zeros_like(params);
  ForwardCache cache;
  const std::vector<double> x = {0.1, -0.2, 0.03, 0.4};
  const std::vector<double> up = {1.0, -0.5};
  for (auto _ : state) {
    cache.run(params, x);
    cache.accumulate_backward(params, up, grad);
  }
  benchmark::DoNotOptimize(grad.layers.data());
}
BENCHMARK(BM_MlpForwardBackward);

// One sample + learn_step (+ priority update for PER) on a full buffer.
void BM_LearnStep(benchmark::State& state) {
  DqnOptions opts;
  opts.replay.strategy = static_cast<ReplayStrategy>(state.range(0));
  Rng init(6), rng(7);
  DqnAgent agent(opts, init);
  for (std::size_t i = 0; i < opts.replay.capacity; ++i) agent.buffer().push(random_transition(rng));
  const bool prioritized = opts.replay.strategy == ReplayStrategy::Prioritized;
  for (auto _ : state) {
    const auto batch = agent.buffer().sample(opts.batch_size, rng, 0.4);
    const auto report = agent.learn_step(batch, opts.lr);
    if (prioritized) agent.buffer().update_priorities(batch.indices, report.td_errors);
  }
  state.SetLabel(std::string(to_string(opts.replay.strategy)));
}
BENCHMARK(BM_LearnStep)
    ->Arg(static_cast<int>(ReplayStrategy::Uniform))
    ->Arg(static_cast<int>(ReplayStrategy::Prioritized));

}  // namespace

BENCHMARK_MAIN();
