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

#include <array>
#include <vector>

#include "swarmhrl/opponents/team_policy.hpp"

namespace swarmhrl {

/// Goal-seeking steering shared by the scripted policies: the unit bearing to
/// the goal plus, for every obstacle circle within `influence` and not behind
/// the agent, a repulsive push and a lateral push that slides around it.
/// Speed is v_max, reduced so the agent does not overshoot the goal.
struct SteeringConfig {
  double influence = 1.5;     // m, distance from the obstacle circle at which steering starts
  double repulsion = 1.0;
  double lateral = 1.5;
};

LowerAction steer_toward(const WorldState& world, int i, Vec2 goal, const SteeringConfig& steering = {});

/// Fixed-priority rules: chase the nearest visible advantaged enemy, else
/// support the nearest chasing or escaping ally, else escape from visible
/// disadvantaged contacts, else patrol a loop of waypoints.
class ExpertRules : public TeamPolicy {
 public:
  explicit ExpertRules(SteeringConfig steering = {}) : steering_(steering) {}
  const char* name() const override { return "expert"; }
  void reset(const WorldState& world, Team team) override;
  std::vector<AgentCommand> act(WorldState& world, Rng& rng) override;

  /// Decision for one agent; advances its patrol waypoint when reached.
  AgentCommand decide(const WorldState& world, int i);
  /// Patrol command only (used as a fallback by other scripted policies).
  AgentCommand patrol(const WorldState& world, int i);

  static std::array<Vec2, 4> patrol_waypoints(const Arena& arena);

 private:
  SteeringConfig steering_;
  Team team_ = Team::Red;
  std::vector<int> waypoint_;  // per agent id
};

/// Ring of candidate attack positions around each visible enemy, scored by
/// how far behind the enemy's heading they lie minus the exposure to the
/// attack sectors of the other visible enemies.
class HeuristicAttack : public TeamPolicy {
 public:
  static constexpr int kRingSize = 12;
  static constexpr double kRingFraction = 0.7;  // ring radius as a fraction of the attack radius

  explicit HeuristicAttack(SteeringConfig steering = {}) : steering_(steering), fallback_(steering) {}
  const char* name() const override { return "heuristic"; }
  void reset(const WorldState& world, Team team) override;
  std::vector<AgentCommand> act(WorldState& world, Rng& rng) override;

  struct Candidate {
    Vec2 position;
    double score = 0.0;
    int enemy = -1;
    int index = -1;  // position on the ring
  };
  /// Candidate j of `target` sits at angle 2*pi*j/kRingSize around it.
  static std::vector<Candidate> ring(const WorldState& world, int target, const std::vector<int>& visible);
  static double threat(const AgentState& enemy, Vec2 at, const EngagementConfig& config);
  /// Best candidate over all visible enemies (ascending id), ties to the
  /// earliest; index -1 when nothing is visible.
  static Candidate best_candidate(const WorldState& world, int i);

 private:
  SteeringConfig steering_;
  ExpertRules fallback_;
  Team team_ = Team::Red;
};

/// Uniform speed in [0, v_max] and heading in [-pi, pi].
class RandomPolicy : public TeamPolicy {
 public:
  const char* name() const override { return "random"; }
  void reset(const WorldState& world, Team team) override;
  std::vector<AgentCommand> act(WorldState& world, Rng& rng) override;

  static LowerAction draw(double v_max, Rng& rng);

 private:
  Team team_ = Team::Red;
};

}  // namespace swarmhrl
