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

#include <cstddef>
#include <vector>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

struct SlotEntry {
  Vec2 rel_pos;
  Vec2 rel_vel;  // zero for obstacle slots
  bool valid = false;
};

/// Masked fixed-slot local view used by the path-planning actor.
struct LowerObservation {
  Vec2 self_pos;
  Vec2 self_vel;
  std::vector<SlotEntry> allies;
  std::vector<SlotEntry> enemies;
  std::vector<SlotEntry> obstacles;

  static std::size_t dim(const SlotConfig& slots);
  /// Normalized network input: self position mapped to [-1, 1], velocities
  /// divided by v_max, relative positions divided by the sensing length,
  /// then five values (pos, vel, mask) per slot.
  std::vector<double> flatten(const EngagementConfig& config) const;
};

struct UpperSlot {
  Vec2 rel_pos;
  Vec2 vel;
  TaskKind task = TaskKind::Searching;  // allies only
  bool valid = false;
};

/// Masked fixed-slot view used by the task-allocation Q network. Enemy task
/// flags are never exposed.
struct UpperObservation {
  Vec2 self_pos;
  Vec2 self_vel;
  TaskKind self_task = TaskKind::Searching;
  std::vector<UpperSlot> allies;
  std::vector<UpperSlot> enemies;

  static std::size_t dim(const SlotConfig& slots);
  std::vector<double> flatten(const EngagementConfig& config) const;
};

LowerObservation build_lower_observation(const WorldState& world, int i, const SlotConfig& slots);
UpperObservation build_upper_observation(const WorldState& world, int i, const SlotConfig& slots);

}  // namespace swarmhrl
