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

#include <cstdint>
#include <vector>

#include "swarmhrl/predict/predictor.hpp"

namespace swarmhrl::predict {

/// Team-level planner that keeps enemy track histories and turns them into
/// search and escape subgoals. By default only enemies inside some live
/// teammate's perception are recorded; `omniscient` records every live enemy.
class GlobalPlanner {
 public:
  GlobalPlanner() = default;
  GlobalPlanner(PredictorConfig config, bool omniscient);

  void reset();

  /// Appends the current position of every enemy of `team` that is visible
  /// at world.step_index. Calling twice for the same step is harmless.
  void observe(const WorldState& world, Team team);

  /// Predicted-position clusters for the current step; computed once per
  /// step index and cached.
  const ClusterSet& clusters(const WorldState& world, Rng& rng);

  Vec2 search_goal(const WorldState& world, Vec2 p, Rng& rng);
  Vec2 escape_goal(const WorldState& world, Vec2 p, Rng& rng);

  const std::vector<TrackHistory>& histories() const { return histories_; }
  const PredictorConfig& config() const { return config_; }
  bool omniscient() const { return omniscient_; }
  int relaxation_events() const { return relaxations_; }

 private:
  TrackHistory& history_for(int enemy_id);

  PredictorConfig config_;
  bool omniscient_ = false;
  std::vector<TrackHistory> histories_;
  ClusterSet cached_;
  std::int64_t cached_step_ = -1;
  int relaxations_ = 0;
};

}  // namespace swarmhrl::predict
