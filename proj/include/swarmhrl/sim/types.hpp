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
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmhrl/vec2.hpp"

namespace swarmhrl {

/// Raised for invalid scenario or configuration input. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

enum class Team : std::uint8_t { Blue = 0, Red = 1 };

inline Team opponent_of(Team t) { return t == Team::Blue ? Team::Red : Team::Blue; }
const char* team_name(Team t);

/// Task flag carried by every agent; the integer codes are part of the observation.
enum class TaskKind : int { Searching = -3, Escaping = -2, Supporting = -1, Chasing = 0 };

inline int task_code(TaskKind t) { return static_cast<int>(t); }
TaskKind task_from_code(int code);
const char* task_name(TaskKind t);

/// Commanded velocity magnitude and direction for one step.
struct LowerAction {
  double speed = 0.0;    // m/s, [0, v_max]
  double heading = 0.0;  // rad, [-pi, pi]
};

struct AgentState {
  int id = 0;
  Team team = Team::Blue;
  Vec2 position;
  Vec2 velocity;
  /// Direction of the last nonzero velocity; orients the attack sector and sensing rectangle.
  double heading = 0.0;
  TaskKind task = TaskKind::Searching;
  bool alive = true;
};

struct Rect {
  Vec2 center;
  double width = 0.0;
  double height = 0.0;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

/// Rectangular obstacles and the circles that enclose them. Collision and
/// occlusion tests only ever look at the circles.
struct ObstacleSet {
  std::vector<Rect> rectangles;
  std::vector<Circle> circles;

  static ObstacleSet from_rectangles(std::vector<Rect> rects, double obstacle_radius);
};

struct Arena {
  double width = 30.0;
  double height = 20.0;

  Vec2 center() const { return {0.5 * width, 0.5 * height}; }
  double diagonal() const { return std::hypot(width, height); }
  bool contains(Vec2 p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }
  Vec2 clamp(Vec2 p) const;
};

/// Engagement constants shared by both teams.
struct EngagementConfig {
  double attack_radius = 1.0;                   // rho_1
  double attack_angle = std::numbers::pi / 2;   // theta_1, full sector opening
  double hit_prob = 0.5;                        // epsilon
  double avoid_radius = 0.3;                    // rho_2
  double obstacle_radius = 0.3;                 // rho_3
  double sense_length = 5.0;                    // d_1
  double sense_width = 5.0;                     // d_2
  double v_max = 2.0;
  double dt = 0.1;
  Arena arena;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Fixed observation slot capacities.
struct SlotConfig {
  int allies = 4;
  int enemies = 4;
  int obstacles = 6;

  bool operator==(const SlotConfig&) const = default;
  void validate() const;
};

struct WorldState {
  std::vector<AgentState> agents;
  ObstacleSet obstacles;
  EngagementConfig config;
  std::int64_t step_index = 0;
  Rng rng;

  int count_alive(Team team) const;
  int team_size(Team team) const;
  /// Ids of the agents of one team, ascending.
  std::vector<int> team_ids(Team team) const;
};

}  // namespace swarmhrl
