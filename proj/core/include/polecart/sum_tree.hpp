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

#include <cstddef>
#include <vector>

namespace polecart {

// Complete binary tree over a power-of-two number of leaves. Each internal
// node holds the sum of its children, so the root is the total mass and a
// point u in [0, total) can be mapped to the leaf whose cumulative interval
// contains it in O(log n). A parallel max tree tracks the largest leaf.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }

  void set(std::size_t leaf, double value);
  double get(std::size_t leaf) const { return sums_[base_ + leaf]; }

  double total() const { return sums_[1]; }
  double max_leaf() const { return maxes_[1]; }

  // Smallest leaf i with u < sum(leaf[0..=i]). Subtrees of zero mass are
  // never entered, so the result always has positive mass when total() > 0.
  std::size_t find(double u) const;

  // Recomputes every internal node from the leaves.
  void rebuild();

  // Largest |node - (left + right)| over all internal nodes.
  double max_internal_error() const;

 private:
  std::size_t capacity_;
  std::size_t base_;  // index of leaf 0; also the number of leaf slots
  std::vector<double> sums_;
  std::vector<double> maxes_;
};

}  // namespace polecart
