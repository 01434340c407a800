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

#include "swarmhrl/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swarmhrl/sim/geometry.hpp"

namespace swarmhrl {

LowerAction clamp_action(const LowerAction& action, double v_max) {
  return {std::clamp(action.speed, 0.0, v_max),
          std::clamp(action.heading, -std::numbers::pi, std::numbers::pi)};
}

AgentState step_kinematics(const AgentState& agent, const LowerAction& action,
                           const EngagementConfig& config, bool* clamped) {
  if (!agent.alive) throw std::invalid_argument("step_kinematics: agent is dead");
  if (!std::isfinite(action.speed) || !std::isfinite(action.heading))
    throw std::invalid_argument("step_kinematics: non-finite action");

  const LowerAction a = clamp_action(action, config.v_max);
  AgentState next = agent;
  const Vec2 velocity = Vec2::from_polar(a.speed, a.heading);
  const Vec2 moved = agent.position + velocity * config.dt;
  next.position = config.arena.clamp(moved);
  next.velocity = velocity;
  if (a.speed > 0.0) next.heading = a.heading;
  if (clamped) *clamped = !(next.position == moved);
  return next;
}

bool in_sensing_rectangle(Vec2 origin, double heading, Vec2 target, const EngagementConfig& config) {
  const Vec2 forward = Vec2::from_polar(1.0, heading);
  const Vec2 d = target - origin;
  const double along = d.dot(forward);
  const double across = d.dot(forward.perp());
  return along >= 0.0 && along <= config.sense_length && std::abs(across) <= 0.5 * config.sense_width;
}

NeighborSets neighbor_sets(const WorldState& world, int i) {
  NeighborSets sets;
  const AgentState& self = world.agents.at(static_cast<std::size_t>(i));
  if (!self.alive) return sets;
  const auto& cfg = world.config;

  for (const auto& other : world.agents) {
    if (other.id == i || !other.alive) continue;
    if (!in_sensing_rectangle(self.position, self.heading, other.position, cfg)) continue;
    if (other.team == self.team) {
      sets.allies.push_back(other.id);
    } else if (line_of_sight(self.position, other.position, world.obstacles)) {
      sets.enemies.push_back(other.id);
    }
  }
  const auto& circles = world.obstacles.circles;
  for (std::size_t c = 0; c < circles.size(); ++c)
    if (in_sensing_rectangle(self.position, self.heading, circles[c].center, cfg))
      sets.obstacles.push_back(static_cast<int>(c));
  return sets;
}

double advantage(const AgentState& self, const AgentState& enemy) {
  const Vec2 bearing = enemy.position - self.position;
  const double vn = self.velocity.norm();
  const double bn = bearing.norm();
  if (vn == 0.0 || bn == 0.0) return 0.0;
  return std::clamp(self.velocity.dot(bearing) / (vn * bn), -1.0, 1.0);
}

bool in_attack_sector(const AgentState& attacker, Vec2 target, const EngagementConfig& config) {
  const Vec2 d = target - attacker.position;
  const double dist = d.norm();
  if (dist > config.attack_radius) return false;
  if (dist == 0.0) return true;
  const double off_axis = std::abs(wrap_angle(d.angle() - attacker.heading));
  return off_axis <= 0.5 * config.attack_angle;
}

std::vector<KillEvent> resolve_attacks(const WorldState& world, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<KillEvent> kills;
  std::vector<bool> hit(world.agents.size(), false);
  for (const auto& attacker : world.agents) {
    if (!attacker.alive) continue;
    for (const auto& victim : world.agents) {
      if (!victim.alive || victim.team == attacker.team) continue;
      if (!in_attack_sector(attacker, victim.position, world.config)) continue;
      const bool success = unit(rng) < world.config.hit_prob;
      if (success && !hit[static_cast<std::size_t>(victim.id)]) {
        hit[static_cast<std::size_t>(victim.id)] = true;
        kills.push_back({attacker.id, victim.id});
      }
    }
  }
  return kills;
}

std::vector<bool> detect_collisions(const WorldState& world) {
  const auto& cfg = world.config;
  const double agent_gap = 2.0 * cfg.avoid_radius;
  const double obstacle_gap = cfg.avoid_radius + cfg.obstacle_radius;
  std::vector<bool> flags(world.agents.size(), false);
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    const auto& a = world.agents[i];
    if (!a.alive) continue;
    for (std::size_t j = i + 1; j < world.agents.size(); ++j) {
      const auto& b = world.agents[j];
      if (b.alive && distance(a.position, b.position) < agent_gap) flags[i] = flags[j] = true;
    }
    if (flags[i]) continue;
    for (const auto& c : world.obstacles.circles) {
      if (distance(a.position, c.center) < obstacle_gap) {
        flags[i] = true;
        break;
      }
    }
  }
  return flags;
}

int StepEvents::kills_by(Team team, const WorldState& world) const {
  int n = 0;
  for (const auto& k : kills)
    if (world.agents[static_cast<std::size_t>(k.attacker)].team == team) ++n;
  return n;
}

StepEvents step_world(WorldState& world, std::span<const LowerAction> actions) {
  if (actions.size() != world.agents.size())
    throw std::invalid_argument("step_world: expected one action per agent");

  StepEvents events;
  events.boundary.assign(world.agents.size(), false);
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    auto& agent = world.agents[i];
    if (!agent.alive) continue;
    bool clamped = false;
    agent = step_kinematics(agent, actions[i], world.config, &clamped);
    events.boundary[i] = clamped;
  }

  events.kills = resolve_attacks(world, world.rng);
  for (const auto& k : events.kills) {
    auto& victim = world.agents[static_cast<std::size_t>(k.victim)];
    victim.alive = false;
    victim.velocity = {};
  }

  events.collisions = detect_collisions(world);
  events.blue_alive = world.count_alive(Team::Blue);
  events.red_alive = world.count_alive(Team::Red);
  events.terminal = events.blue_alive == 0 || events.red_alive == 0;
  if (events.blue_alive > 0 && events.red_alive == 0) events.winner = Team::Blue;
  if (events.red_alive > 0 && events.blue_alive == 0) events.winner = Team::Red;
  ++world.step_index;
  return events;
}

}  // namespace swarmhrl
