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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polecart/error.hpp"
#include "polecart/harness.hpp"

namespace fs = std::filesystem;
using namespace polecart;

namespace {

// Failures print exactly one line: `error: <kind>: <message>`.
int fail(std::string_view kind, std::string_view message) {
  std::string msg(message);
  for (auto& c : msg) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error: " << kind << ": " << msg << "\n";
  return 1;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("POLECART_OUT"); env && *env) return env;
  return "polecart_out";
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  ExperimentConfig scratch;
  set_config_value(scratch, "run.seeds", list);
  return scratch.seeds;
}

int execute(const ExperimentConfig& cfg, const fs::path& out, bool quiet) {
  const auto summaries = run_experiment(cfg);
  write_csv(cfg, summaries, out);
  emit_plot(summaries, out / "plot.svg");

  int aborted = 0;
  for (const auto& s : summaries) {
    if (!quiet) {
      const double last = s.moving_average.empty() ? 0.0 : s.moving_average.back();
      std::cout << "seed " << s.seed << ": episodes=" << s.records.size()
                << " final_avg=" << last << " wall_s=" << s.total_wall_s;
      if (s.error) std::cout << " ABORTED";
      std::cout << "\n";
    }
    if (s.error) ++aborted;
  }
  if (!quiet) std::cout << "wrote " << out.string() << "\n";
  if (aborted) return fail("aborted", std::to_string(aborted) + " run(s) aborted; see manifest");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polecart: cart-pole Q-learning and DQN experiments"};
  app.require_subcommand(1);

  std::string config_path, seeds, out_dir, in_dir, svg_out, dir_a, dir_b, figure;
  std::optional<int> episodes;
  std::size_t window = 100;
  double threshold = 200.0;
  bool timing = false, quiet = false, config_only = false;

  auto* run = app.add_subcommand("run", "run the experiments described by a config file");
  run->add_option("--config", config_path, "config file (dotted key = value lines)")->required();
  run->add_option("--seeds", seeds, "comma-separated seeds, overrides run.seeds");
  run->add_option("--out", out_dir, "output directory (default $POLECART_OUT)");
  run->add_option("--episodes", episodes, "override run.episodes");
  run->add_flag("--timing", timing, "record per-episode wall time in the CSVs");
  run->add_flag("--quiet", quiet);

  auto* plot = app.add_subcommand("plot", "render an SVG from a run directory");
  plot->add_option("--in", in_dir, "run directory")->required();
  plot->add_option("--out", svg_out, "SVG path")->required();

  auto* compare = app.add_subcommand("compare", "compare two run directories");
  compare->add_option("--a", dir_a)->required();
  compare->add_option("--b", dir_b)->required();
  compare->add_option("--window", window, "moving-average window");
  compare->add_option("--threshold", threshold, "return threshold for episodes-to-threshold");

  auto* replicate = app.add_subcommand("replicate", "run a named experiment preset");
  replicate->add_option("--figure", figure)
      ->required()
      ->check(CLI::IsMember(replicate_figures()));
  replicate->add_option("--seeds", seeds);
  replicate->add_option("--out", out_dir);
  replicate->add_option("--episodes", episodes, "override the preset episode count");
  replicate->add_flag("--config-only", config_only, "write config.txt only, do not train");
  replicate->add_flag("--timing", timing);
  replicate->add_flag("--quiet", quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*run || *replicate) {
      ExperimentConfig cfg = *run ? load_config(config_path) : replicate_config(figure);
      if (!seeds.empty()) cfg.seeds = parse_seeds(seeds);
      if (episodes) cfg.episodes = *episodes;
      if (timing) cfg.record_wall_time = true;
      cfg.validate();
      const fs::path out = out_dir.empty()
                               ? (*run ? default_out_dir() : default_out_dir() / ("figure_" + figure))
                               : fs::path(out_dir);
      if (*replicate) {
        fs::create_directories(out);
        std::ofstream(out / "config.txt") << cfg.to_text();
        if (config_only) {
          if (!quiet) std::cout << "wrote " << (out / "config.txt").string() << "\n";
          return 0;
        }
      }
      return execute(cfg, out, quiet);
    }
    if (*plot) {
      const auto loaded = read_run_dir(in_dir);
      emit_plot(loaded.summaries, svg_out);
      return 0;
    }
    if (*compare) {
      const auto a = read_run_dir(dir_a);
      const auto b = read_run_dir(dir_b);
      std::cout << compare_runs(a.summaries, b.summaries, window, threshold).to_text();
      return 0;
    }
  } catch (const ConfigError& e) {
    return fail("config", e.what());
  } catch (const std::exception& e) {
    return fail("runtime", e.what());
  }
  return 0;
}
