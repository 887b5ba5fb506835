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

// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Usage: polecart_acceptance [path-to-polecart-cli]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "polecart/config.hpp"
#include "polecart/env_cartpole.hpp"
#include "polecart/harness.hpp"
#include "polecart/mlp.hpp"
#include "polecart/replay.hpp"
#include "polecart/rng.hpp"
#include "polecart/schedules.hpp"
#include "polecart/sum_tree.hpp"
#include "polecart/tabular_q.hpp"

using namespace polecart;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<EpisodeRecord>& recs, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += recs[i].episode_return;
  return s / static_cast<double>(hi - lo);
}

double final_average(const RunSummary& run, std::size_t window) {
  const auto n = run.records.size();
  return mean_of(run.records, n > window ? n - window : 0, n);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1: backprop against central differences -------------------------------

Outcome gradient_oracle() {
  Rng rng(101);
  const double h = 1e-5;
  double worst = 0.0;
  const int draws = 24;
  for (int d = 0; d < draws; ++d) {
    const std::vector<std::size_t> widths = {4, 3 + rng.below(8), 3 + rng.below(8), 2};
    auto params = mlp_init(widths, rng);
    for (auto& l : params.layers)
      for (auto& b : l.bias) b = rng.uniform(-0.5, 0.5);
    std::vector<double> x(4), up(2);
    for (auto& v : x) v = rng.uniform(-2, 2);
    for (auto& v : up) v = rng.uniform(-1, 1);
    auto objective = [&](const MlpParams& p) {
      const auto y = forward(p, x);
      return up[0] * y[0] + up[1] * y[1];
    };
    const auto g = backward(params, x, up);
    for (std::size_t k = 0; k < params.layers.size(); ++k) {
      auto check = [&](double& slot, double analytic) {
        const double saved = slot;
        slot = saved + h;
        const double f_up = objective(params);
        slot = saved - h;
        const double f_down = objective(params);
        slot = saved;
        const double numeric = (f_up - f_down) / (2 * h);
        worst = std::max(worst, std::abs(numeric - analytic) /
                                    std::max({std::abs(numeric), std::abs(analytic), 1e-6}));
      };
      for (std::size_t i = 0; i < params.layers[k].weights.size(); ++i)
        check(params.layers[k].weights[i], g.layers[k].weights[i]);
      for (std::size_t i = 0; i < params.layers[k].bias.size(); ++i)
        check(params.layers[k].bias[i], g.layers[k].bias[i]);
    }
  }
  return {worst < 1e-4, std::to_string(draws) + " draws, max rel err " + fmt("%.3g", worst)};
}

// ---- 2: q_update sweeps against value iteration -----------------------------

Outcome tabular_oracle() {
  // States 0,1,2. Action 1 moves right, action 0 moves left (clamped).
  // Moving right from state 2 pays 10 and ends the episode.
  const double gamma = 0.9;
  auto next = [](int s, int a) { return a == 1 ? std::min(s + 1, 2) : std::max(s - 1, 0); };
  auto terminal = [](int s, int a) { return s == 2 && a == 1; };
  auto reward = [&](int s, int a) { return terminal(s, a) ? 10.0 : 0.0; };

  double vi[3][2] = {};
  for (int it = 0; it < 2000; ++it) {
    double nv[3][2];
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 2; ++a) {
        const int sn = next(s, a);
        nv[s][a] = reward(s, a) + (terminal(s, a) ? 0.0 : gamma * std::max(vi[sn][0], vi[sn][1]));
      }
    std::copy(&nv[0][0], &nv[0][0] + 6, &vi[0][0]);
  }

  QTable q(3, 2);
  for (int sweep = 0; sweep < 3000; ++sweep)
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 2; ++a)
        q_update(q, static_cast<std::size_t>(s), static_cast<std::size_t>(a), reward(s, a),
                 static_cast<std::size_t>(next(s, a)), terminal(s, a), 0.5, gamma);

  double worst = 0.0;
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < 2; ++a) worst = std::max(worst, std::abs(q.at(s, a) - vi[s][a]));
  return {worst <= 1e-9, "max |Q - Q*| " + fmt("%.3g", worst)};
}

// ---- 3: sampling frequencies and tree descent -------------------------------

ReplayBuffer two_leaf_buffer(double alpha) {
  ReplayOptions o;
  o.strategy = ReplayStrategy::Prioritized;
  o.capacity = 2;
  o.priority_alpha = alpha;
  ReplayBuffer buf(o);
  Transition t{};
  buf.push(t);
  t.reward = 1.0;
  buf.push(t);
  const std::vector<std::size_t> idx = {0, 1};
  const std::vector<double> td = {1.0 - o.priority_eps, 3.0 - o.priority_eps};
  buf.update_priorities(idx, td);
  return buf;
}

Outcome sum_tree_statistics() {
  auto buf = two_leaf_buffer(1.0);
  Rng rng(303);
  const int total = 100000, batch = 100;
  int hits1 = 0;
  for (int i = 0; i < total / batch; ++i) {
    const auto b = buf.sample(batch, rng, 1.0);
    for (auto s : b.indices) hits1 += s == 1;
  }
  const double f1 = static_cast<double>(hits1) / total, f0 = 1.0 - f1;
  const bool freq_ok = std::abs(f0 - 0.25) <= 0.01 && std::abs(f1 - 0.75) <= 0.01;

  SumTree tree(64);
  std::vector<double> leaves(64);
  for (std::size_t i = 0; i < 64; ++i) {
    leaves[i] = static_cast<double>(rng.below(9)) * 0.25;  // dyadic: all sums exact
    tree.set(i, leaves[i]);
  }
  int mismatches = 0;
  for (int q = 0; q < 1000; ++q) {
    const double u = rng.uniform() * tree.total();
    std::size_t expect = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
      acc += leaves[i];
      if (u < acc) {
        expect = i;
        break;
      }
    }
    mismatches += tree.find(u) != expect;
  }
  return {freq_ok && mismatches == 0, "freq " + fmt("%.4f", f0) + "/" + fmt("%.4f", f1) +
                                          ", descent mismatches " + std::to_string(mismatches) +
                                          "/1000"};
}

// ---- 4: importance weights and the alpha = 0 limit --------------------------

Outcome is_weights() {
  auto buf = two_leaf_buffer(1.0);
  Rng rng(404);
  double w0 = -1.0, w1 = -1.0;
  for (int attempt = 0; attempt < 100 && (w0 < 0 || w1 < 0); ++attempt) {
    const auto b = buf.sample(64, rng, 1.0);
    bool has0 = false, has1 = false;
    for (auto s : b.indices) (s == 0 ? has0 : has1) = true;
    if (!has0 || !has1) continue;
    for (std::size_t i = 0; i < b.size(); ++i) (b.indices[i] == 0 ? w0 : w1) = b.is_weights[i];
  }
  const bool weights_ok = std::abs(w0 - 1.0) <= 1e-12 && std::abs(w1 - 1.0 / 3.0) <= 1e-12;

  ReplayOptions o;
  o.strategy = ReplayStrategy::Prioritized;
  o.capacity = 10;
  o.priority_alpha = 0.0;
  ReplayBuffer flat(o);
  for (int i = 0; i < 10; ++i) flat.push(Transition{});
  std::vector<std::size_t> idx(10);
  std::vector<double> td(10);
  for (std::size_t i = 0; i < 10; ++i) {
    idx[i] = i;
    td[i] = static_cast<double>(i * i) + 0.5;
  }
  flat.update_priorities(idx, td);
  std::vector<int> counts(10, 0);
  const int total = 100000;
  // Single draws: a larger batch is stratified and would hit every leaf equally.
  for (int i = 0; i < total; ++i) ++counts[flat.sample(1, rng, 1.0).indices[0]];
  double chi2 = 0.0;
  const double expected = total / 10.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Upper 0.001 quantile of chi-square with 9 degrees of freedom.
  const double critical = 27.877;
  return {weights_ok && chi2 < critical,
          "w = [" + fmt("%.15g", w0) + ", " + fmt("%.15g", w1) + "], alpha=0 chi2(9) " +
              fmt("%.2f", chi2) + " < " + fmt("%.3f", critical)};
}

// ---- 5: random-policy baseline and mirror symmetry --------------------------

Outcome environment_baseline() {
  Rng rng(505);
  CartPole env;
  double total = 0.0;
  for (int ep = 0; ep < 1000; ++ep) {
    env.reset(rng);
    while (!env.done()) env.step(rng.below(2) ? Action::Right : Action::Left);
    total += static_cast<double>(env.elapsed_steps());
  }
  const double mean = total / 1000.0;

  const CartPoleParams p;
  int asymmetric = 0;
  for (int i = 0; i < 10000; ++i) {
    CartState s{rng.uniform(-2.4, 2.4), rng.uniform(-3, 3), rng.uniform(-0.2, 0.2),
                rng.uniform(-3.5, 3.5)};
    const Action a = rng.below(2) ? Action::Right : Action::Left;
    const Action flipped = a == Action::Right ? Action::Left : Action::Right;
    const CartState m{-s.x, -s.v, -s.theta, -s.omega};
    const auto o1 = step_dynamics(s, a, 0, p).next_state;
    const auto o2 = step_dynamics(m, flipped, 0, p).next_state;
    asymmetric += !(o2 == CartState{-o1.x, -o1.v, -o1.theta, -o1.omega});
  }
  return {mean >= 10.0 && mean <= 60.0 && asymmetric == 0,
          "mean length " + fmt("%.2f", mean) + ", mirror violations " + std::to_string(asymmetric) +
              "/10000"};
}

// ---- 6: tabular learning curve rises ----------------------------------------

std::pair<int, std::vector<double>> tabular_ratios(const ExperimentConfig& cfg) {
  const auto runs = run_experiment(cfg);
  int ok = 0;
  std::vector<double> ratios;
  for (const auto& r : runs) {
    const auto n = r.records.size();
    const double first = mean_of(r.records, 0, 1000);
    const double last = mean_of(r.records, n - 1000, n);
    ratios.push_back(last / first);
    ok += last >= 2.0 * first;
  }
  return {ok, ratios};
}

std::string join_ratios(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.2f", x);
  return s;
}

Outcome tabular_reproduction() {
  const auto [ok, ratios] = tabular_ratios(replicate_config("10"));
  return {ok >= 3, std::to_string(ok) + "/5 seeds with last/first >= 2 (ratios " +
                       join_ratios(ratios) + ", epsilon clocked per episode)"};
}

// ---- 7, 8, 9: learning and runtime comparisons -------------------------------

struct SharedRuns {
  std::vector<RunSummary> per;
  std::vector<RunSummary> uniform;
  std::vector<RunSummary> tabular;
};

Outcome per_efficiency(const SharedRuns& runs) {
  int ok = 0;
  std::string firsts;
  for (const auto& r : runs.per) {
    const auto hit = episodes_to_threshold(r.moving_average, 200.0);
    // Episodes are numbered from 1 here.
    if (hit && *hit + 1 < 400) ++ok;
    firsts += (firsts.empty() ? "" : " ") + (hit ? std::to_string(*hit + 1) : std::string("never"));
  }
  return {ok >= 2, std::to_string(ok) + "/5 seeds reach MA100 >= 200 before episode 400 (first at " +
                       firsts + ")"};
}

Outcome dqn_beats_tabular(const SharedRuns& runs) {
  std::vector<double> dqn, tab;
  for (const auto& r : runs.uniform) dqn.push_back(final_average(r, 100));
  for (const auto& r : runs.tabular) tab.push_back(final_average(r, 100));
  const double md = median(dqn), mt = median(tab);
  return {md > mt, "median final MA100: dqn+uniform " + fmt("%.1f", md) + " vs tabular " +
                       fmt("%.1f", mt)};
}

Outcome per_slower(const SharedRuns& runs) {
  const auto rep = compare_runs(runs.per, runs.uniform);
  const double ratio = rep.wall_time_ratio.value_or(0.0);
  return {ratio > 1.0, "wall ms/episode PER " + fmt("%.2f", rep.a.wall_ms_per_episode) +
                           " vs uniform " + fmt("%.2f", rep.b.wall_ms_per_episode) + ", ratio " +
                           fmt("%.2f", ratio)};
}

// ---- 10: byte-identical outputs ---------------------------------------------

bool same_files(const fs::path& a, const fs::path& b, int& compared) {
  bool same = true;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename();
    if (name.extension() != ".csv" && name.extension() != ".svg") continue;
    ++compared;
    same = same && fs::exists(b / name) && slurp(e.path()) == slurp(b / name);
  }
  return same;
}

Outcome reproducibility(const std::string& cli) {
  ExperimentConfig cfg = replicate_config("7");
  cfg.episodes = 40;
  cfg.seeds = {1, 2, 3};
  const auto base = fs::temp_directory_path() / "polecart_acceptance_repro";
  fs::remove_all(base);
  int compared = 0;
  bool same = true;
  for (const char* run : {"lib_a", "lib_b"}) {
    const auto summaries = run_experiment(cfg);
    write_csv(cfg, summaries, base / run);
    emit_plot(summaries, base / run / "plot.svg");
  }
  same = same_files(base / "lib_a", base / "lib_b", compared);
  std::string detail = std::to_string(compared) + " library files";

  if (!cli.empty()) {
    fs::create_directories(base);
    std::ofstream(base / "config.txt") << cfg.to_text();
    for (const char* run : {"cli_a", "cli_b"}) {
      const std::string cmd = "\"" + cli + "\" run --quiet --config \"" +
                              (base / "config.txt").string() + "\" --out \"" +
                              (base / run).string() + "\"";
      same = same && std::system(cmd.c_str()) == 0;
    }
    int cli_compared = 0;
    same = same && same_files(base / "cli_a", base / "cli_b", cli_compared);
    same = same && cli_compared == 4;
    detail += ", " + std::to_string(cli_compared) + " CLI files";
  }
  fs::remove_all(base);
  return {same && compared == 4, detail + " byte-identical across repeated runs"};
}

// ---- 11: schedule table -----------------------------------------------------

Outcome schedule_table() {
  bool exact = epsilon_at(Schedule::exponential(0.9999), 0) == 1.0 &&
               epsilon_at(Schedule::linear(), 25000) == 0.0 &&
               epsilon_at(Schedule::inverse(), 1000) == 0.25 &&
               epsilon_at(Schedule::sinusoidal(), 0) == 0.0;
  std::int64_t checked = 0, out_of_range = 0;
  for (auto s : {Schedule::exponential(), Schedule::linear(), Schedule::logarithmic(),
                 Schedule::inverse(), Schedule::sinusoidal()}) {
    for (std::int64_t t = 0; t <= 1000000; t += 97) {
      const double e = epsilon_at(s, t);
      out_of_range += !(e >= 0.0 && e <= 1.0);
      ++checked;
    }
  }
  return {exact && out_of_range == 0, std::string("exact values ") + (exact ? "ok" : "wrong") + ", " +
                                          std::to_string(out_of_range) + "/" +
                                          std::to_string(checked) + " samples outside [0,1]"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;
  auto report = [&failures](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  };

  report(1, "gradient oracle", gradient_oracle);
  report(2, "tabular oracle", tabular_oracle);
  report(3, "sum-tree statistics", sum_tree_statistics);
  report(4, "importance weights", is_weights);
  report(5, "environment baseline", environment_baseline);
  report(6, "tabular learning curve", tabular_reproduction);

  SharedRuns runs;
  const auto shared_start = std::chrono::steady_clock::now();
  {
    auto per = replicate_config("7");
    auto uniform = replicate_config("5");
    auto tab = replicate_config("3");
    tab.episodes = 600;
    runs.per = run_experiment(per);
    runs.uniform = run_experiment(uniform);
    runs.tabular = run_experiment(tab);
  }
  std::printf("[INFO]    learning runs for 7-9 (PER, uniform, tabular; 5 seeds x 600 episodes): %.1f s\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - shared_start).count());
  report(7, "PER efficiency", [&] { return per_efficiency(runs); });
  report(8, "DQN beats tabular", [&] { return dqn_beats_tabular(runs); });
  report(9, "PER costs more per episode", [&] { return per_slower(runs); });
  report(10, "reproducibility", [&] { return reproducibility(cli); });
  report(11, "schedule table", schedule_table);

  // Informational: the same tabular run with epsilon advanced per step.
  auto per_step = replicate_config("10");
  per_step.epsilon_clock = EpsilonClock::Step;
  const auto [ok, ratios] = tabular_ratios(per_step);
  std::printf("[INFO]  6 tabular learning curve, epsilon per step: %d/5 seeds (ratios %s)\n", ok,
              join_ratios(ratios).c_str());

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
