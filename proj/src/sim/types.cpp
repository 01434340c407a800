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

#include "swarmhrl/sim/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarmhrl/sim/geometry.hpp"

namespace swarmhrl {

const char* team_name(Team t) { return t == Team::Blue ? "blue" : "red"; }

TaskKind task_from_code(int code) {
  switch (code) {
    case -3: return TaskKind::Searching;
    case -2: return TaskKind::Escaping;
    case -1: return TaskKind::Supporting;
    case 0: return TaskKind::Chasing;
    default: throw std::invalid_argument("unknown task code " + std::to_string(code));
  }
}

const char* task_name(TaskKind t) {
  switch (t) {
    case TaskKind::Searching: return "searching";
    case TaskKind::Escaping: return "escaping";
    case TaskKind::Supporting: return "supporting";
    case TaskKind::Chasing: return "chasing";
  }
  return "?";
}

ObstacleSet ObstacleSet::from_rectangles(std::vector<Rect> rects, double obstacle_radius) {
  ObstacleSet set;
  for (const auto& r : rects) {
    auto circles = cover_rectangle(r, obstacle_radius);
    set.circles.insert(set.circles.end(), circles.begin(), circles.end());
  }
  set.rectangles = std::move(rects);
  return set;
}

Vec2 Arena::clamp(Vec2 p) const {
  return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

void EngagementConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(attack_radius, "attack_radius");
  positive(avoid_radius, "avoid_radius");
  positive(obstacle_radius, "obstacle_radius");
  positive(sense_length, "sense_length");
  positive(sense_width, "sense_width");
  positive(v_max, "v_max");
  positive(dt, "dt");
  positive(arena.width, "arena.width");
  positive(arena.height, "arena.height");
  if (!(hit_prob >= 0.0 && hit_prob <= 1.0)) throw ConfigError("hit_prob must lie in [0, 1]");
  if (!(attack_angle > 0.0 && attack_angle <= 2.0 * std::numbers::pi))
    throw ConfigError("attack_angle must lie in (0, 2*pi]");
}

void SlotConfig::validate() const {
  if (allies < 0 || enemies < 0 || obstacles < 0) throw ConfigError("slot capacities must be >= 0");
}

int WorldState::count_alive(Team team) const {
  return static_cast<int>(std::count_if(agents.begin(), agents.end(),
                                        [&](const AgentState& a) { return a.alive && a.team == team; }));
}

int WorldState::team_size(Team team) const {
  return static_cast<int>(
      std::count_if(agents.begin(), agents.end(), [&](const AgentState& a) { return a.team == team; }));
}

std::vector<int> WorldState::team_ids(Team team) const {
  std::vector<int> ids;
  for (const auto& a : agents)
    if (a.team == team) ids.push_back(a.id);
  return ids;
}

}  // namespace swarmhrl
