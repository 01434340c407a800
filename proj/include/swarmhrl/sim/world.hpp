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

#include <optional>
#include <span>
#include <vector>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

/// Advances one agent by the first-order model
/// p' = p + dt * speed * (cos psi, sin psi). The new velocity is the commanded
/// vector; the heading is only replaced when speed > 0. Positions leaving the
/// arena are clamped and `clamped` (when given) is set.
/// Throws std::invalid_argument for a non-finite action or a dead agent.
AgentState step_kinematics(const AgentState& agent, const LowerAction& action,
                           const EngagementConfig& config, bool* clamped = nullptr);

/// Clips an action to the legal ranges [0, v_max] x [-pi, pi].
LowerAction clamp_action(const LowerAction& action, double v_max);

/// True iff `target` lies in the sensing rectangle of an observer at
/// `origin` facing `heading`: d1 forward along the heading, d2/2 to each side.
bool in_sensing_rectangle(Vec2 origin, double heading, Vec2 target, const EngagementConfig& config);

struct NeighborSets {
  std::vector<int> allies;     // agent ids, rectangle containment only
  std::vector<int> enemies;    // agent ids, containment and line of sight
  std::vector<int> obstacles;  // circle indices whose centers are contained
};

/// Perception and communication neighbors of live agent i. Dead agents are
/// never listed. Each list is ascending in id / index.
NeighborSets neighbor_sets(const WorldState& world, int i);

/// Cosine of the angle between self.velocity and (enemy.position - self.position);
/// 0 when the agent is stationary or the positions coincide.
double advantage(const AgentState& self, const AgentState& enemy);

/// True iff `target` is within the attack sector of `attacker`.
bool in_attack_sector(const AgentState& attacker, Vec2 target, const EngagementConfig& config);

struct KillEvent {
  int attacker = 0;
  int victim = 0;
};

/// One Bernoulli(hit_prob) draw per (live attacker, live opponent in sector)
/// pair, in ascending attacker then victim id order. All draws see the same
/// input state; victims are reported once even when hit several times.
std::vector<KillEvent> resolve_attacks(const WorldState& world, Rng& rng);

/// flag[i] is true iff live agent i is closer than 2*rho_2 to another live
/// agent or closer than rho_2 + rho_3 to an obstacle circle center.
std::vector<bool> detect_collisions(const WorldState& world);

struct StepEvents {
  std::vector<KillEvent> kills;
  std::vector<bool> collisions;  // per agent
  std::vector<bool> boundary;    // per agent, position was clamped to the arena
  int blue_alive = 0;
  int red_alive = 0;
  bool terminal = false;
  /// Set when exactly one team survives a terminal step.
  std::optional<Team> winner;

  int kills_by(Team team, const WorldState& world) const;
};

/// Applies kinematics, then attacks against the moved state, then removes the
/// killed agents, then flags collisions. `actions` holds one entry per agent
/// (index == id); entries for dead agents are ignored.
/// Throws std::invalid_argument when actions.size() != world.agents.size().
StepEvents step_world(WorldState& world, std::span<const LowerAction> actions);

}  // namespace swarmhrl
