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

#include "polecart/mlp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "polecart/error.hpp"

namespace polecart {

namespace {

DenseLayer zero_layer(std::size_t in, std::size_t out) {
  return DenseLayer{in, out, std::vector<double>(in * out, 0.0), std::vector<double>(out, 0.0)};
}

std::vector<DenseLayer> zero_layers_like(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> z;
  z.reserve(layers.size());
  for (const auto& l : layers) z.push_back(zero_layer(l.in, l.out));
  return z;
}

void check_widths(std::span<const std::size_t> widths) {
  require(widths.size() >= 2, "mlp: need at least input and output widths");
  for (auto w : widths) require(w > 0, "mlp: zero layer width");
}

template <typename F>
void for_each_tensor(std::vector<DenseLayer>& layers, F&& f) {
  for (auto& l : layers) {
    f(l.weights);
    f(l.bias);
  }
}

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::vector<std::size_t> MlpParams::widths() const {
  std::vector<std::size_t> w;
  if (layers.empty()) return w;
  w.push_back(layers.front().in);
  for (const auto& l : layers) w.push_back(l.out);
  return w;
}

std::size_t MlpParams::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

Gradient Gradient::zeros_like(const MlpParams& params) {
  return Gradient{zero_layers_like(params.layers)};
}

Gradient& Gradient::operator+=(const Gradient& other) {
  require(other.layers.size() == layers.size(), "Gradient: shape mismatch");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    auto& a = layers[k];
    const auto& b = other.layers[k];
    require(a.weights.size() == b.weights.size() && a.bias.size() == b.bias.size(),
            "Gradient: shape mismatch");
    for (std::size_t i = 0; i < a.weights.size(); ++i) a.weights[i] += b.weights[i];
    for (std::size_t i = 0; i < a.bias.size(); ++i) a.bias[i] += b.bias[i];
  }
  return *this;
}

Gradient& Gradient::operator*=(double scale) {
  for_each_tensor(layers, [scale](std::vector<double>& t) {
    for (auto& x : t) x *= scale;
  });
  return *this;
}

bool Gradient::all_finite() const {
  return std::all_of(layers.begin(), layers.end(), [](const DenseLayer& l) {
    return polecart::all_finite(l.weights) && polecart::all_finite(l.bias);
  });
}

MlpParams mlp_zeros(std::span<const std::size_t> widths) {
  check_widths(widths);
  MlpParams p;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    p.layers.push_back(zero_layer(widths[k], widths[k + 1]));
  }
  p.optimizer.first_moment = zero_layers_like(p.layers);
  p.optimizer.second_moment = zero_layers_like(p.layers);
  return p;
}

MlpParams mlp_init(std::span<const std::size_t> widths, Rng& rng) {
  check_widths(widths);
  require(widths.front() == 4 && widths.back() == 2, "mlp_init: widths must run 4 -> ... -> 2");
  MlpParams p = mlp_zeros(widths);
  for (auto& l : p.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(l.in));
    for (auto& w : l.weights) w = rng.uniform(-limit, limit);
  }
  return p;
}

std::span<const double> ForwardCache::run(const MlpParams& params, std::span<const double> input) {
  require(!params.layers.empty(), "forward: network has no layers");
  require(input.size() == params.layers.front().in, "forward: input width mismatch");
  require(all_finite(input), "forward: non-finite input");

  const std::size_t n = params.layers.size();
  activations_.resize(n + 1);
  pre_.resize(n);
  activations_[0].assign(input.begin(), input.end());
  for (std::size_t k = 0; k < n; ++k) {
    const DenseLayer& l = params.layers[k];
    const auto& x = activations_[k];
    auto& z = pre_[k];
    z.assign(l.bias.begin(), l.bias.end());
    for (std::size_t r = 0; r < l.out; ++r) {
      const double* row = l.weights.data() + r * l.in;
      double acc = 0.0;
      for (std::size_t c = 0; c < l.in; ++c) acc += row[c] * x[c];
      z[r] += acc;
    }
    auto& a = activations_[k + 1];
    a = z;
    if (k + 1 < n) {
      for (auto& v : a) v = v > 0.0 ? v : 0.0;
    }
  }
  return activations_.back();
}

void ForwardCache::accumulate_backward(const MlpParams& params, std::span<const double> upstream,
                                       Gradient& grad) {
  const std::size_t n = params.layers.size();
  require(activations_.size() == n + 1, "backward: forward pass not run");
  require(upstream.size() == params.layers.back().out, "backward: upstream width mismatch");
  require(grad.layers.size() == n, "backward: gradient shape mismatch");

  delta_.assign(upstream.begin(), upstream.end());
  for (std::size_t k = n; k-- > 0;) {
    const DenseLayer& l = params.layers[k];
    DenseLayer& g = grad.layers[k];
    const auto& x = activations_[k];
    for (std::size_t r = 0; r < l.out; ++r) {
      const double d = delta_[r];
      g.bias[r] += d;
      if (d == 0.0) continue;
      double* grow = g.weights.data() + r * l.in;
      for (std::size_t c = 0; c < l.in; ++c) grow[c] += d * x[c];
    }
    if (k == 0) break;
    next_delta_.assign(l.in, 0.0);
    for (std::size_t r = 0; r < l.out; ++r) {
      const double d = delta_[r];
      if (d == 0.0) continue;
      const double* row = l.weights.data() + r * l.in;
      for (std::size_t c = 0; c < l.in; ++c) next_delta_[c] += d * row[c];
    }
    const auto& z = pre_[k - 1];
    for (std::size_t c = 0; c < l.in; ++c) {
      if (!(z[c] > 0.0)) next_delta_[c] = 0.0;
    }
    delta_.swap(next_delta_);
  }
}

std::vector<double> forward(const MlpParams& params, std::span<const double> input) {
  ForwardCache cache;
  auto out = cache.run(params, input);
  return {out.begin(), out.end()};
}

Gradient backward(const MlpParams& params, std::span<const double> input,
                  std::span<const double> upstream) {
  require(all_finite(upstream), "backward: non-finite upstream");
  ForwardCache cache;
  cache.run(params, input);
  Gradient g = Gradient::zeros_like(params);
  cache.accumulate_backward(params, upstream, g);
  return g;
}

void optimizer_step(MlpParams& params, const Gradient& grad, double lr,
                    const OptimizerConfig& cfg) {
  require(lr > 0.0, "optimizer_step: lr must be positive");
  require(grad.layers.size() == params.layers.size(), "optimizer_step: shape mismatch");
  for (std::size_t k = 0; k < grad.layers.size(); ++k) {
    require(grad.layers[k].weights.size() == params.layers[k].weights.size() &&
                grad.layers[k].bias.size() == params.layers[k].bias.size(),
            "optimizer_step: shape mismatch");
  }
  if (!grad.all_finite()) throw std::domain_error("optimizer_step: non-finite gradient");

  auto& opt = params.optimizer;
  ++opt.step;

  if (cfg.kind == OptimizerKind::Sgd) {
    for (std::size_t k = 0; k < params.layers.size(); ++k) {
      auto& l = params.layers[k];
      const auto& g = grad.layers[k];
      for (std::size_t i = 0; i < l.weights.size(); ++i) l.weights[i] -= lr * g.weights[i];
      for (std::size_t i = 0; i < l.bias.size(); ++i) l.bias[i] -= lr * g.bias[i];
    }
    return;
  }

  if (opt.first_moment.size() != params.layers.size()) {
    opt.first_moment = zero_layers_like(params.layers);
    opt.second_moment = zero_layers_like(params.layers);
  }
  const double t = static_cast<double>(opt.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  auto update = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                    std::vector<double>& v) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  };
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    auto& l = params.layers[k];
    const auto& g = grad.layers[k];
    update(l.weights, g.weights, opt.first_moment[k].weights, opt.second_moment[k].weights);
    update(l.bias, g.bias, opt.first_moment[k].bias, opt.second_moment[k].bias);
  }
}

// ---- checkpoints ----------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'P', 'C', 'M', 'L', 'P', 'C', 'K', 'P'};

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("checkpoint: truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("checkpoint: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void save_checkpoint(const MlpParams& params, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kCheckpointVersion);
  const auto widths = params.widths();
  put_u32(out, static_cast<std::uint32_t>(widths.size()));
  for (auto w : widths) put_u32(out, static_cast<std::uint32_t>(w));
  for (const auto& l : params.layers) {
    for (double w : l.weights) put_f64(out, w);
    for (double b : l.bias) put_f64(out, b);
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

MlpParams load_checkpoint(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  if (const auto version = get_u32(in); version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = get_u32(in);
  if (count < 2 || count > 64) throw std::runtime_error("checkpoint: bad layer count");
  std::vector<std::size_t> widths(count);
  for (auto& w : widths) {
    w = get_u32(in);
    if (w == 0) throw std::runtime_error("checkpoint: zero width");
  }
  MlpParams p = mlp_zeros(widths);
  for (auto& l : p.layers) {
    for (auto& w : l.weights) w = get_f64(in);
    for (auto& b : l.bias) b = get_f64(in);
  }
  return p;
}

void save_checkpoint(const MlpParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
  save_checkpoint(params, out);
}

MlpParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  return load_checkpoint(in);
}

}  // namespace polecart
