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

#include "swarmhrl/opponents/scripted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "swarmhrl/sim/world.hpp"

namespace swarmhrl {

void write_actions(const std::vector<AgentCommand>& commands, std::vector<LowerAction>& actions) {
  for (const auto& c : commands) actions.at(static_cast<std::size_t>(c.id)) = c.action;
}

LowerAction steer_toward(const WorldState& world, int i, Vec2 goal, const SteeringConfig& steering) {
  const AgentState& self = world.agents[static_cast<std::size_t>(i)];
  const auto& cfg = world.config;
  const Vec2 to_goal = goal - self.position;
  const double dist = to_goal.norm();
  if (dist < 1e-9) return {0.0, wrap_angle(self.heading)};
  const Vec2 dir = to_goal / dist;
  const double clearance = cfg.avoid_radius + cfg.obstacle_radius;

  Vec2 total = dir;
  for (const auto& c : world.obstacles.circles) {
    const Vec2 to_obs = c.center - self.position;
    const double centre_dist = to_obs.norm();
    const double gap = centre_dist - clearance;
    if (gap >= steering.influence || to_obs.dot(dir) <= 0.0 || centre_dist > dist + clearance) continue;
    const double w = (steering.influence - std::max(gap, 0.0)) / steering.influence;
    total += (-to_obs).normalized() * (w * steering.repulsion);
    // Slide past on the side away from the obstacle; dead ahead goes left.
    const Vec2 side = dir.cross(to_obs) > 0.0 ? -dir.perp() : dir.perp();
    total += side * (w * steering.lateral);
  }
  const double heading = total.squared_norm() > 0.0 ? total.angle() : dir.angle();
  return clamp_action({std::min(cfg.v_max, dist / cfg.dt), heading}, cfg.v_max);
}

// ---------------------------------------------------------------------------

std::array<Vec2, 4> ExpertRules::patrol_waypoints(const Arena& arena) {
  return {Vec2{0.25 * arena.width, 0.25 * arena.height}, Vec2{0.75 * arena.width, 0.25 * arena.height},
          Vec2{0.75 * arena.width, 0.75 * arena.height}, Vec2{0.25 * arena.width, 0.75 * arena.height}};
}

void ExpertRules::reset(const WorldState& world, Team team) {
  team_ = team;
  waypoint_.assign(world.agents.size(), 0);
  const auto wps = patrol_waypoints(world.config.arena);
  for (const auto& a : world.agents) {
    int best = 0;
    for (int k = 1; k < 4; ++k)
      if (distance(a.position, wps[static_cast<std::size_t>(k)]) < distance(a.position, wps[static_cast<std::size_t>(best)]))
        best = k;
    waypoint_[static_cast<std::size_t>(a.id)] = best;
  }
}

AgentCommand ExpertRules::patrol(const WorldState& world, int i) {
  if (waypoint_.size() < world.agents.size()) waypoint_.resize(world.agents.size(), 0);
  const auto wps = patrol_waypoints(world.config.arena);
  const Vec2 p = world.agents[static_cast<std::size_t>(i)].position;
  int& k = waypoint_[static_cast<std::size_t>(i)];
  if (distance(p, wps[static_cast<std::size_t>(k)]) < 1.0) k = (k + 1) % 4;
  const Vec2 goal = wps[static_cast<std::size_t>(k)];
  return {i, TaskKind::Searching, goal, steer_toward(world, i, goal, steering_)};
}

AgentCommand ExpertRules::decide(const WorldState& world, int i) {
  const AgentState& self = world.agents[static_cast<std::size_t>(i)];
  const NeighborSets ns = neighbor_sets(world, i);
  auto nearest = [&](const std::vector<int>& ids, auto&& pred) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int id : ids) {
      const AgentState& o = world.agents[static_cast<std::size_t>(id)];
      if (!pred(o)) continue;
      const double d = distance(self.position, o.position);
      if (d < best_d) {
        best = id;
        best_d = d;
      }
    }
    return best;
  };
  auto command = [&](TaskKind task, Vec2 goal) {
    goal = world.config.arena.clamp(goal);
    return AgentCommand{i, task, goal, steer_toward(world, i, goal, steering_)};
  };

  const int target = nearest(ns.enemies, [&](const AgentState& e) { return advantage(self, e) > 0.0; });
  if (target >= 0) return command(TaskKind::Chasing, world.agents[static_cast<std::size_t>(target)].position);

  const int ally = nearest(ns.allies, [](const AgentState& a) {
    return a.task == TaskKind::Chasing || a.task == TaskKind::Escaping;
  });
  if (ally >= 0) return command(TaskKind::Supporting, world.agents[static_cast<std::size_t>(ally)].position);

  Vec2 threat_sum;
  int threats = 0;
  for (int id : ns.enemies) {
    const AgentState& e = world.agents[static_cast<std::size_t>(id)];
    if (advantage(self, e) < 0.0) {
      threat_sum += e.position;
      ++threats;
    }
  }
  if (threats > 0) {
    Vec2 away = (self.position - threat_sum / threats).normalized();
    if (away.squared_norm() == 0.0) away = Vec2::from_polar(1.0, self.heading);
    return command(TaskKind::Escaping, self.position + away * world.config.sense_length);
  }
  return patrol(world, i);
}

std::vector<AgentCommand> ExpertRules::act(WorldState& world, Rng&) {
  std::vector<AgentCommand> out;
  for (int id : world.team_ids(team_))
    if (world.agents[static_cast<std::size_t>(id)].alive) out.push_back(decide(world, id));
  // Flags are written after every decision so the order of agents does not matter.
  for (const auto& c : out) world.agents[static_cast<std::size_t>(c.id)].task = c.task;
  return out;
}

// ---------------------------------------------------------------------------

double HeuristicAttack::threat(const AgentState& enemy, Vec2 at, const EngagementConfig& config) {
  const Vec2 d = at - enemy.position;
  const double dist = d.norm();
  const double reach = 2.0 * config.attack_radius;
  if (dist >= reach) return 0.0;
  const Vec2 h = Vec2::from_polar(1.0, enemy.heading);
  const double facing = dist > 0.0 ? std::max(0.0, h.dot(d) / dist) : 1.0;
  return facing * (1.0 - dist / reach);
}

std::vector<HeuristicAttack::Candidate> HeuristicAttack::ring(const WorldState& world, int target,
                                                             const std::vector<int>& visible) {
  const auto& cfg = world.config;
  const AgentState& e = world.agents[static_cast<std::size_t>(target)];
  const Vec2 h = Vec2::from_polar(1.0, e.heading);
  std::vector<Candidate> out;
  out.reserve(kRingSize);
  for (int j = 0; j < kRingSize; ++j) {
    const Vec2 u = Vec2::from_polar(1.0, 2.0 * std::numbers::pi * j / kRingSize);
    Candidate c{e.position + u * (kRingFraction * cfg.attack_radius), -h.dot(u), target, j};
    for (int k : visible)
      if (k != target) c.score -= threat(world.agents[static_cast<std::size_t>(k)], c.position, cfg);
    out.push_back(c);
  }
  return out;
}

HeuristicAttack::Candidate HeuristicAttack::best_candidate(const WorldState& world, int i) {
  const std::vector<int> visible = neighbor_sets(world, i).enemies;
  Candidate best;
  best.score = -std::numeric_limits<double>::infinity();
  for (int e : visible)
    for (const Candidate& c : ring(world, e, visible))
      if (c.score > best.score) best = c;
  return best;
}

void HeuristicAttack::reset(const WorldState& world, Team team) {
  fallback_.reset(world, team);
  team_ = team;
}

std::vector<AgentCommand> HeuristicAttack::act(WorldState& world, Rng&) {
  std::vector<AgentCommand> out;
  for (int id : world.team_ids(team_)) {
    if (!world.agents[static_cast<std::size_t>(id)].alive) continue;
    const Candidate best = best_candidate(world, id);
    if (best.index < 0) {
      out.push_back(fallback_.patrol(world, id));
      continue;
    }
    const Vec2 goal = world.config.arena.clamp(best.position);
    out.push_back({id, TaskKind::Chasing, goal, steer_toward(world, id, goal, steering_)});
  }
  for (const auto& c : out) world.agents[static_cast<std::size_t>(c.id)].task = c.task;
  return out;
}

// ---------------------------------------------------------------------------

LowerAction RandomPolicy::draw(double v_max, Rng& rng) {
  std::uniform_real_distribution<double> speed(0.0, v_max);
  std::uniform_real_distribution<double> heading(-std::numbers::pi, std::numbers::pi);
  const double s = speed(rng);
  return {s, heading(rng)};
}

void RandomPolicy::reset(const WorldState&, Team team) { team_ = team; }

std::vector<AgentCommand> RandomPolicy::act(WorldState& world, Rng& rng) {
  std::vector<AgentCommand> out;
  for (int id : world.team_ids(team_)) {
    const AgentState& a = world.agents[static_cast<std::size_t>(id)];
    if (!a.alive) continue;
    out.push_back({id, TaskKind::Searching, a.position, draw(world.config.v_max, rng)});
  }
  for (const auto& c : out) world.agents[static_cast<std::size_t>(c.id)].task = c.task;
  return out;
}

}  // namespace swarmhrl
