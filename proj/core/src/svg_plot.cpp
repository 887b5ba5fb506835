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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "polecart/error.hpp"
#include "polecart/harness.hpp"

namespace polecart {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
                                                 "#8c564b", "#e377c2", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Rounds up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (v <= 0.0) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= v) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(std::span<const RunSummary> summaries, std::string_view title) {
  require(!summaries.empty(), "render_svg: need at least one summary");

  std::size_t max_episodes = 1;
  double max_return = 0.0;
  for (const auto& s : summaries) {
    max_episodes = std::max(max_episodes, s.records.size());
    for (const auto& r : s.records) max_return = std::max(max_return, r.episode_return);
  }
  const double x_max = static_cast<double>(std::max<std::size_t>(max_episodes - 1, 1));
  const double y_max = nice_ceiling(max_return);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double episode) { return kLeft + plot_w * episode / x_max; };
  auto py = [&](double value) { return kTop + plot_h * (1.0 - value / y_max); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
           escape(title) + "</text>\n";
  }

  // Axes, ticks and labels.
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + plot_h) + "\" x2=\"" +
         num(kLeft + plot_w) + "\" y2=\"" + num(kTop + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(kTop + plot_h) + "\"/>\n";
  svg += "</g>\n<g font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = y_max * i / 5.0;
    const double xv = x_max * i / 5.0;
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(yv) + 4) +
           "\" text-anchor=\"end\">" + num(yv) + "</text>\n";
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(kTop + plot_h + 16) +
           "\" text-anchor=\"middle\">" + std::to_string(static_cast<long long>(std::llround(xv))) +
           "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 16) +
         "\" text-anchor=\"middle\" font-size=\"13\">episode</text>\n";
  svg += "<text x=\"18\" y=\"" + num(kTop + plot_h / 2) + "\" text-anchor=\"middle\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " + num(kTop + plot_h / 2) + ")\">return</text>\n";
  svg += "</g>\n";

  for (std::size_t k = 0; k < summaries.size(); ++k) {
    const auto& s = summaries[k];
    const char* color = kPalette[k % kPalette.size()];
    svg += "<g class=\"series\" data-seed=\"" + std::to_string(s.seed) + "\">\n";
    for (const auto& r : s.records) {
      svg += "<circle cx=\"" + num(px(static_cast<double>(r.episode))) + "\" cy=\"" +
             num(py(r.episode_return)) + "\" r=\"1.5\" fill=\"" + color +
             "\" fill-opacity=\"0.45\"/>\n";
    }
    const auto ma = s.moving_average.size() == s.records.size()
                        ? s.moving_average
                        : moving_average(returns_of(s.records), 100);
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < ma.size(); ++i) {
      if (i) svg += ' ';
      svg += num(px(static_cast<double>(s.records[i].episode))) + "," + num(py(ma[i]));
    }
    svg += "\"/>\n</g>\n";
  }

  svg += "<g class=\"legend\" font-size=\"12\">\n";
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(k);
    const double x = kWidth - kRight + 16;
    svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
           kPalette[k % kPalette.size()] + "\"/>\n";
    svg += "<text class=\"legend-entry\" x=\"" + num(x + 16) + "\" y=\"" + num(y + 1) + "\">seed " +
           std::to_string(summaries[k].seed) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void emit_plot(std::span<const RunSummary> summaries, const std::filesystem::path& path,
               std::string_view title) {
  const std::string svg = render_svg(summaries, title);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << svg;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace polecart
