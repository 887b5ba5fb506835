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

#include "polecart/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "polecart/dqn.hpp"
#include "polecart/error.hpp"
#include "polecart/rng.hpp"
#include "polecart/tabular_q.hpp"

namespace polecart {

namespace {

// Stream ids for Rng::derive.
constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kInitStream = 2;

std::string fmt17(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::vector<double> moving_average(std::span<const double> returns, std::size_t window) {
  require(window >= 1, "moving_average: window must be >= 1");
  std::vector<double> out(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) {
    const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += returns[j];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

std::vector<double> returns_of(std::span<const EpisodeRecord> records) {
  std::vector<double> r;
  r.reserve(records.size());
  for (const auto& rec : records) r.push_back(rec.episode_return);
  return r;
}

RunSummary run_single(const ExperimentConfig& config, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  RunSummary summary;
  summary.seed = seed;
  summary.fingerprint = config.fingerprint();

  const auto start = Clock::now();
  CartPole env(config.env_params());
  Rng rng = Rng::derive(seed, kTrainStream);
  try {
    if (config.algorithm == Algorithm::Tabular) {
      auto result = train_tabular(env, config.schedule, config.episodes, config.tabular_options(), rng);
      summary.records = std::move(result.records);
    } else {
      Rng init_rng = Rng::derive(seed, kInitStream);
      DqnAgent agent(config.dqn_options(), init_rng);
      summary.records = agent.train(env, config.schedule, config.episodes, rng);
    }
  } catch (const TrainingAborted& e) {
    summary.error = e.what();
  }
  summary.total_wall_s = std::chrono::duration<double>(Clock::now() - start).count();

  if (!config.record_wall_time) {
    for (auto& r : summary.records) r.wall_ms = 0.0;
  }
  summary.moving_average = moving_average(returns_of(summary.records), config.ma_window);
  return summary;
}

std::vector<RunSummary> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunSummary> out(config.seeds.size());
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.threads),
                                                    config.seeds.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.seeds.size(); ++i) out[i] = run_single(config, config.seeds[i]);
    return out;
  }
  // Each task owns its slot in `out`; nothing else is shared.
  for (std::size_t begin = 0; begin < config.seeds.size(); begin += workers) {
    std::vector<std::future<void>> tasks;
    const std::size_t end = std::min(begin + workers, config.seeds.size());
    for (std::size_t i = begin; i < end; ++i) {
      tasks.push_back(std::async(std::launch::async,
                                 [&, i] { out[i] = run_single(config, config.seeds[i]); }));
    }
    for (auto& t : tasks) t.get();
  }
  return out;
}

// ---- CSV / manifest ---------------------------------------------------------

std::string csv_file_name(std::uint64_t seed) { return "seed_" + std::to_string(seed) + ".csv"; }

std::string format_csv(std::span<const EpisodeRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.episode);
    out += ',';
    out += fmt17(r.episode_return);
    out += ',';
    out += std::to_string(r.length);
    out += ',';
    out += fmt17(r.epsilon_at_end);
    out += ',';
    out += fmt17(r.wall_ms);
    out += ',';
    out += std::to_string(r.global_step_at_end);
    out += '\n';
  }
  return out;
}

std::vector<EpisodeRecord> parse_csv(std::string_view text) {
  std::vector<EpisodeRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: unexpected header '" + line + "'");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) + " has " +
                               std::to_string(cells.size()) + " cells");
    }
    try {
      EpisodeRecord r;
      r.episode = std::stoll(cells[0]);
      r.episode_return = std::stod(cells[1]);
      r.length = std::stoll(cells[2]);
      r.epsilon_at_end = std::stod(cells[3]);
      r.wall_ms = std::stod(cells[4]);
      r.global_step_at_end = std::stoll(cells[5]);
      records.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error("csv: malformed number on line " + std::to_string(lineno));
    }
  }
  return records;
}

std::string format_manifest(const ExperimentConfig& config, std::span<const RunSummary> summaries) {
  std::string out = "# polecart run manifest\n[config]\n";
  out += config.to_text();
  out += "[run]\n";
  out += "prng = ";
  out += Rng::kAlgorithm;
  out += "\nfingerprint = " + config.fingerprint() + "\n";
  out += "epsilon_log_base = e\n";
  out += "optimizer_init = he_uniform\n";
  for (const auto& s : summaries) {
    out += "seed." + std::to_string(s.seed) + " = " + csv_file_name(s.seed) + " episodes=" +
           std::to_string(s.records.size());
    out += s.error ? " status=aborted error=\"" + *s.error + "\"" : std::string(" status=ok");
    out += '\n';
  }
  return out;
}

void write_csv(const ExperimentConfig& config, std::span<const RunSummary> summaries,
               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& s : summaries) write_file(dir / csv_file_name(s.seed), format_csv(s.records));
  write_file(dir / "manifest.txt", format_manifest(config, summaries));
}

LoadedRuns read_run_dir(const std::filesystem::path& dir) {
  const std::string manifest = read_file(dir / "manifest.txt");
  const auto cfg_begin = manifest.find("[config]\n");
  const auto run_begin = manifest.find("[run]\n");
  if (cfg_begin == std::string::npos || run_begin == std::string::npos || run_begin < cfg_begin) {
    throw std::runtime_error("malformed manifest in " + dir.string());
  }
  LoadedRuns loaded;
  loaded.config = parse_config(std::string_view(manifest).substr(
      cfg_begin + 9, run_begin - (cfg_begin + 9)));
  const std::string fingerprint = loaded.config.fingerprint();
  for (auto seed : loaded.config.seeds) {
    RunSummary s;
    s.seed = seed;
    s.fingerprint = fingerprint;
    s.records = parse_csv(read_file(dir / csv_file_name(seed)));
    s.moving_average = moving_average(returns_of(s.records), loaded.config.ma_window);
    for (const auto& r : s.records) s.total_wall_s += r.wall_ms / 1000.0;
    loaded.summaries.push_back(std::move(s));
  }
  return loaded;
}

// ---- comparison -------------------------------------------------------------

std::optional<std::int64_t> episodes_to_threshold(std::span<const double> moving_avg,
                                                  double threshold) {
  for (std::size_t i = 0; i < moving_avg.size(); ++i) {
    if (moving_avg[i] >= threshold) return static_cast<std::int64_t>(i);
  }
  return std::nullopt;
}

namespace {

GroupStats group_stats(std::span<const RunSummary> runs, std::size_t window, double threshold) {
  GroupStats g;
  g.runs = runs.size();
  std::vector<double> finals;
  std::vector<double> reached;
  double wall_ms = 0.0;
  std::size_t episodes = 0;
  for (const auto& run : runs) {
    const auto ma = moving_average(returns_of(run.records), window);
    finals.push_back(ma.empty() ? 0.0 : ma.back());
    auto ep = episodes_to_threshold(ma, threshold);
    g.episodes_to_threshold.push_back(ep);
    if (ep) reached.push_back(static_cast<double>(*ep));
    double run_ms = run.total_wall_s * 1000.0;
    if (run_ms <= 0.0) {
      for (const auto& r : run.records) run_ms += r.wall_ms;
    }
    wall_ms += run_ms;
    episodes += run.records.size();
  }
  g.median_final_average = median(finals);
  if (!reached.empty()) g.median_episodes_to_threshold = median(reached);
  g.wall_ms_per_episode = episodes ? wall_ms / static_cast<double>(episodes) : 0.0;
  return g;
}

std::string opt_text(const std::optional<double>& v) { return v ? fmt17(*v) : "absent"; }

}  // namespace

ComparisonReport compare_runs(std::span<const RunSummary> a, std::span<const RunSummary> b,
                              std::size_t window, double threshold) {
  require(!a.empty() && !b.empty(), "compare_runs: both groups must be non-empty");
  ComparisonReport rep;
  rep.window = window;
  rep.threshold = threshold;
  rep.a = group_stats(a, window, threshold);
  rep.b = group_stats(b, window, threshold);
  rep.final_average_delta = rep.b.median_final_average - rep.a.median_final_average;
  if (rep.a.median_episodes_to_threshold && rep.b.median_episodes_to_threshold) {
    rep.episodes_to_threshold_delta =
        *rep.b.median_episodes_to_threshold - *rep.a.median_episodes_to_threshold;
  }
  if (rep.a.wall_ms_per_episode > 0.0 && rep.b.wall_ms_per_episode > 0.0) {
    rep.wall_time_ratio = rep.a.wall_ms_per_episode / rep.b.wall_ms_per_episode;
  }
  return rep;
}

std::string ComparisonReport::to_text() const {
  std::string out;
  out += "window = " + std::to_string(window) + "\n";
  out += "threshold = " + fmt17(threshold) + "\n";
  auto group = [&out](const char* name, const GroupStats& g) {
    const std::string p = std::string(name) + ".";
    out += p + "runs = " + std::to_string(g.runs) + "\n";
    out += p + "median_final_average = " + fmt17(g.median_final_average) + "\n";
    out += p + "episodes_to_threshold = ";
    for (std::size_t i = 0; i < g.episodes_to_threshold.size(); ++i) {
      if (i) out += ",";
      const auto& e = g.episodes_to_threshold[i];
      out += e ? std::to_string(*e) : "absent";
    }
    out += "\n";
    out += p + "median_episodes_to_threshold = " + opt_text(g.median_episodes_to_threshold) + "\n";
    out += p + "wall_ms_per_episode = " + fmt17(g.wall_ms_per_episode) + "\n";
  };
  group("a", a);
  group("b", b);
  out += "delta.final_average = " + fmt17(final_average_delta) + "\n";
  out += "delta.episodes_to_threshold = " + opt_text(episodes_to_threshold_delta) + "\n";
  out += "wall_time_ratio = " + opt_text(wall_time_ratio) + "\n";
  return out;
}

// ---- replication presets ----------------------------------------------------

std::vector<std::string> replicate_figures() {
  return {"3", "4a", "4b", "4c", "4d", "5", "6", "7", "8a", "8b", "8c", "8d", "10"};
}

ExperimentConfig replicate_config(std::string_view figure) {
  ExperimentConfig c;
  auto dqn = [&c](ReplayStrategy replay, Schedule schedule) {
    c.algorithm = Algorithm::Dqn;
    c.episodes = 600;
    c.replay = replay;
    c.schedule = schedule;
  };
  auto by_letter = [](char letter) {
    switch (letter) {
      case 'a': return Schedule::linear();
      case 'b': return Schedule::logarithmic();
      case 'c': return Schedule::inverse();
      default: return Schedule::sinusoidal();
    }
  };
  if (figure == "3" || figure == "10") {
    c.algorithm = Algorithm::Tabular;
    c.episodes = 10000;
    c.schedule = Schedule::exponential(0.9999);
    // Preset 10 advances epsilon once per episode rather than per step.
    if (figure == "10") c.epsilon_clock = EpsilonClock::Episode;
  } else if (figure.size() == 2 && figure[0] == '4' && figure[1] >= 'a' && figure[1] <= 'd') {
    dqn(ReplayStrategy::Uniform, by_letter(figure[1]));
  } else if (figure == "5") {
    dqn(ReplayStrategy::Uniform, Schedule::exponential(0.9999));
  } else if (figure == "6") {
    dqn(ReplayStrategy::None, Schedule::exponential(0.9999));
  } else if (figure == "7") {
    dqn(ReplayStrategy::Prioritized, Schedule::exponential(0.9999));
  } else if (figure.size() == 2 && figure[0] == '8' && figure[1] >= 'a' && figure[1] <= 'd') {
    dqn(ReplayStrategy::Prioritized, by_letter(figure[1]));
  } else {
    throw ConfigError("figure", "unknown figure '" + std::string(figure) + "'");
  }
  return c;
}

}  // namespace polecart
