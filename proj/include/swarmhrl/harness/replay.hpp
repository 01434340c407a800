// Copyright 2026 The swarmhrl Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <vector>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

/// JSON Lines replay: one object per world state, the initial one included.
///   {"step":k,"agents":[{"id":..,"team":"blue","x":..,"y":..,"vx":..,"vy":..,
///     "heading":..,"task":-3,"alive":true}, ...]}
class ReplayWriter {
 public:
  /// Throws ConfigError when the file cannot be created.
  explicit ReplayWriter(const std::filesystem::path& path);
  void write(const WorldState& world);
  std::size_t lines() const { return lines_; }

 private:
  std::ofstream os_;
  std::size_t lines_ = 0;
};

struct ReplayFrame {
  std::int64_t step = 0;
  std::vector<AgentState> agents;

  int alive(Team team) const;
};

/// Throws ConfigError on unreadable or malformed input.
std::vector<ReplayFrame> load_replay(const std::filesystem::path& path);

}  // namespace swarmhrl
