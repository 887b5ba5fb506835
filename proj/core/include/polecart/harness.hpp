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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polecart/config.hpp"
#include "polecart/episode.hpp"

namespace polecart {

struct RunSummary {
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> records;
  std::vector<double> moving_average;
  std::string fingerprint;
  double total_wall_s = 0.0;
  std::optional<std::string> error;  // set when the run aborted part way
};

// Element i is the mean of returns[max(0, i - window + 1) ..= i].
std::vector<double> moving_average(std::span<const double> returns, std::size_t window);

std::vector<double> returns_of(std::span<const EpisodeRecord> records);

// One run of `config` for a single seed. Never throws on a training abort;
// the records gathered so far are kept and `error` is filled in.
RunSummary run_single(const ExperimentConfig& config, std::uint64_t seed);

// One summary per configured seed, in seed-list order. Runs are independent
// and may execute on `config.threads` worker threads. Throws ConfigError on an
// invalid config.
std::vector<RunSummary> run_experiment(const ExperimentConfig& config);

// ---- on-disk layout ---------------------------------------------------------
//   <dir>/seed_<seed>.csv   episode,return,length,epsilon,wall_ms,global_step
//   <dir>/manifest.txt      config text plus run metadata
inline constexpr std::string_view kCsvHeader = "episode,return,length,epsilon,wall_ms,global_step";

std::string csv_file_name(std::uint64_t seed);
std::string format_csv(std::span<const EpisodeRecord> records);
std::vector<EpisodeRecord> parse_csv(std::string_view text);
std::string format_manifest(const ExperimentConfig& config, std::span<const RunSummary> summaries);

// Writes the per-seed CSVs and the manifest; the directory is created if
// needed. Throws std::runtime_error with the offending path on I/O failure.
void write_csv(const ExperimentConfig& config, std::span<const RunSummary> summaries,
               const std::filesystem::path& dir);

struct LoadedRuns {
  ExperimentConfig config;
  std::vector<RunSummary> summaries;
};

// Reads back a directory produced by write_csv.
LoadedRuns read_run_dir(const std::filesystem::path& dir);

// ---- plotting ---------------------------------------------------------------

// SVG scatter of per-episode returns (one <circle> each) with the moving
// average drawn as one <polyline> per seed, plus one legend entry per seed.
std::string render_svg(std::span<const RunSummary> summaries, std::string_view title = "");
void emit_plot(std::span<const RunSummary> summaries, const std::filesystem::path& path,
               std::string_view title = "");

// ---- comparison -------------------------------------------------------------

struct GroupStats {
  std::size_t runs = 0;
  double median_final_average = 0.0;
  // First episode whose moving average reaches the threshold, per run; empty
  // when a run never gets there.
  std::vector<std::optional<std::int64_t>> episodes_to_threshold;
  std::optional<double> median_episodes_to_threshold;  // over runs that reached it
  double wall_ms_per_episode = 0.0;
};

struct ComparisonReport {
  double threshold = 200.0;
  std::size_t window = 100;
  GroupStats a;
  GroupStats b;
  double final_average_delta = 0.0;                  // b - a
  std::optional<double> episodes_to_threshold_delta;  // b - a, when both reached
  std::optional<double> wall_time_ratio;              // a / b per episode; absent without timings

  std::string to_text() const;
};

// The moving averages are recomputed with `window`.
ComparisonReport compare_runs(std::span<const RunSummary> a, std::span<const RunSummary> b,
                              std::size_t window = 100, double threshold = 200.0);

std::optional<std::int64_t> episodes_to_threshold(std::span<const double> moving_avg,
                                                  double threshold);

// ---- replication presets ----------------------------------------------------

// Preset ids: 3, 4a, 4b, 4c, 4d, 5, 6, 7, 8a, 8b, 8c, 8d, 10.
std::vector<std::string> replicate_figures();
ExperimentConfig replicate_config(std::string_view figure);

}  // namespace polecart
