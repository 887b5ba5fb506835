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

namespace polecart {

// One row of training output.
struct EpisodeRecord {
  std::int64_t episode = 0;
  double episode_return = 0.0;  // undiscounted sum of rewards
  std::int64_t length = 0;      // environment steps taken
  double epsilon_at_end = 0.0;
  double wall_ms = 0.0;
  std::int64_t global_step_at_end = 0;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

}  // namespace polecart
