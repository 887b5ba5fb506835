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

#include "polecart/sum_tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "polecart/error.hpp"

namespace polecart {

SumTree::SumTree(std::size_t capacity)
    : capacity_(capacity),
      base_(std::bit_ceil(std::max<std::size_t>(capacity, 1))),
      sums_(2 * base_, 0.0),
      maxes_(2 * base_, 0.0) {
  require(capacity > 0, "SumTree: capacity must be positive");
}

void SumTree::set(std::size_t leaf, double value) {
  require(leaf < capacity_, "SumTree::set: leaf out of range");
  require(value >= 0.0 && std::isfinite(value), "SumTree::set: priority must be finite and >= 0");
  std::size_t i = base_ + leaf;
  sums_[i] = value;
  maxes_[i] = value;
  for (i /= 2; i >= 1; i /= 2) {
    sums_[i] = sums_[2 * i] + sums_[2 * i + 1];
    maxes_[i] = std::max(maxes_[2 * i], maxes_[2 * i + 1]);
  }
}

std::size_t SumTree::find(double u) const {
  std::size_t i = 1;
  while (i < base_) {
    const double left = sums_[2 * i];
    const double right = sums_[2 * i + 1];
    if ((u < left && left > 0.0) || right <= 0.0) {
      i = 2 * i;
    } else {
      u -= left;
      i = 2 * i + 1;
    }
  }
  return i - base_;
}

void SumTree::rebuild() {
  for (std::size_t i = base_ - 1; i >= 1; --i) {
    sums_[i] = sums_[2 * i] + sums_[2 * i + 1];
    maxes_[i] = std::max(maxes_[2 * i], maxes_[2 * i + 1]);
  }
}

double SumTree::max_internal_error() const {
  double err = 0.0;
  for (std::size_t i = 1; i < base_; ++i) {
    err = std::max(err, std::abs(sums_[i] - (sums_[2 * i] + sums_[2 * i + 1])));
  }
  return err;
}

}  // namespace polecart
