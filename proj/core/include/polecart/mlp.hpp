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
#include <iosfwd>
#include <span>
#include <vector>

#include "polecart/rng.hpp"

namespace polecart {

// Affine layer y = W x + b, W stored row-major (out x in).
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double& w(std::size_t row, std::size_t col) { return weights[row * in + col]; }
  double w(std::size_t row, std::size_t col) const { return weights[row * in + col]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Per-layer first/second moment estimates plus the shared step counter.
struct OptimizerState {
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
  std::int64_t step = 0;

  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

struct MlpParams {
  std::vector<DenseLayer> layers;
  OptimizerState optimizer;

  std::vector<std::size_t> widths() const;
  std::size_t num_parameters() const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

// Same shape as MlpParams::layers; each entry holds dL/dW and dL/db.
struct Gradient {
  std::vector<DenseLayer> layers;

  static Gradient zeros_like(const MlpParams& params);
  Gradient& operator+=(const Gradient& other);
  Gradient& operator*=(double scale);
  bool all_finite() const;
};

enum class OptimizerKind { Adam, Sgd };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// He-uniform weights (U[-sqrt(6/fan_in), sqrt(6/fan_in)]), zero biases,
// zeroed optimizer state. Widths must run 4 -> ... -> 2.
MlpParams mlp_init(std::span<const std::size_t> widths, Rng& rng);

// Same as mlp_init without the 4-in/2-out restriction; every weight and bias
// set to zero.
MlpParams mlp_zeros(std::span<const std::size_t> widths);

// Affine layers with ReLU between them; the last layer is linear.
std::vector<double> forward(const MlpParams& params, std::span<const double> input);

// Exact gradient of <upstream, forward(params, input)> with respect to every
// parameter. ReLU'(0) is taken as 0.
Gradient backward(const MlpParams& params, std::span<const double> input,
                  std::span<const double> upstream);

// Forward pass that keeps pre-activations so the backward pass can reuse it.
class ForwardCache {
 public:
  ForwardCache() = default;
  std::span<const double> run(const MlpParams& params, std::span<const double> input);
  // Accumulates d<upstream, output>/dparams into `grad`.
  void accumulate_backward(const MlpParams& params, std::span<const double> upstream,
                           Gradient& grad);
  std::span<const double> output() const { return activations_.back(); }

 private:
  std::vector<std::vector<double>> activations_;  // [0] is the input
  std::vector<std::vector<double>> pre_;          // pre-activation per layer
  std::vector<double> delta_;
  std::vector<double> next_delta_;
};

// Applies one update. Throws std::domain_error, leaving params untouched,
// when the gradient contains a non-finite value.
void optimizer_step(MlpParams& params, const Gradient& grad, double lr,
                    const OptimizerConfig& config = {});

// Deep copy; equivalent to the copy constructor, named for call-site clarity.
inline MlpParams clone_params(const MlpParams& params) { return params; }

// Checkpoint format (all integers and floats little-endian):
//   magic "PCMLPCKP" (8 bytes), u32 version = 1, u32 width count,
//   u32 widths[count], then for each layer its weights (row-major f64)
//   followed by its biases (f64). Optimizer state is not stored.
inline constexpr std::uint32_t kCheckpointVersion = 1;
void save_checkpoint(const MlpParams& params, std::ostream& out);
MlpParams load_checkpoint(std::istream& in);
void save_checkpoint(const MlpParams& params, const std::filesystem::path& path);
MlpParams load_checkpoint(const std::filesystem::path& path);

}  // namespace polecart
