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

#include "swarmhrl/predict/planner.hpp"

#include <algorithm>

#include "swarmhrl/sim/world.hpp"

namespace swarmhrl::predict {

GlobalPlanner::GlobalPlanner(PredictorConfig config, bool omniscient)
    : config_(config), omniscient_(omniscient) {
  config_.validate();
}

void GlobalPlanner::reset() {
  histories_.clear();
  cached_ = {};
  cached_step_ = -1;
  relaxations_ = 0;
}

TrackHistory& GlobalPlanner::history_for(int enemy_id) {
  auto it = std::find_if(histories_.begin(), histories_.end(),
                         [&](const TrackHistory& h) { return h.enemy_id == enemy_id; });
  if (it != histories_.end()) return *it;
  histories_.push_back({enemy_id, {}, {}});
  std::sort(histories_.begin(), histories_.end(),
            [](const TrackHistory& a, const TrackHistory& b) { return a.enemy_id < b.enemy_id; });
  return *std::find_if(histories_.begin(), histories_.end(),
                       [&](const TrackHistory& h) { return h.enemy_id == enemy_id; });
}

void GlobalPlanner::observe(const WorldState& world, Team team) {
  std::vector<bool> seen(world.agents.size(), false);
  if (omniscient_) {
    for (const auto& a : world.agents)
      if (a.alive && a.team != team) seen[static_cast<std::size_t>(a.id)] = true;
  } else {
    for (const auto& a : world.agents) {
      if (!a.alive || a.team != team) continue;
      for (int e : neighbor_sets(world, a.id).enemies) seen[static_cast<std::size_t>(e)] = true;
    }
  }
  for (std::size_t id = 0; id < seen.size(); ++id)
    if (seen[id]) history_for(static_cast<int>(id)).append(world.step_index, world.agents[id].position);
}

const ClusterSet& GlobalPlanner::clusters(const WorldState& world, Rng& rng) {
  if (cached_step_ == world.step_index) return cached_;
  std::vector<Vec2> points;
  for (const auto& h : histories_) {
    // Stale tracks of dead enemies carry no information about live ones.
    if (!world.agents[static_cast<std::size_t>(h.enemy_id)].alive) continue;
    for (const auto& traj : rollout(h, config_, world.config, world.obstacles, rng))
      points.insert(points.end(), traj.positions.begin(), traj.positions.end());
  }
  cached_ = cluster(points, config_.link_threshold);
  cached_step_ = world.step_index;
  return cached_;
}

Vec2 GlobalPlanner::search_goal(const WorldState& world, Vec2 p, Rng& rng) {
  return search_subgoal(clusters(world, rng), p, world.config.arena);
}

Vec2 GlobalPlanner::escape_goal(const WorldState& world, Vec2 p, Rng& rng) {
  const auto& c = clusters(world, rng);
  auto cands = escape_candidates(c, world.config, world.obstacles, config_.escape_distance,
                                 config_.candidates, rng);
  relaxations_ += cands.relaxations;
  return escape_subgoal(cands.points, p);
}

}  // namespace swarmhrl::predict
