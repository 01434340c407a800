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

#include "swarmhrl/sim/observation.hpp"

#include <algorithm>
#include <utility>

#include "swarmhrl/sim/world.hpp"

namespace swarmhrl {
namespace {

// Stable ascending-distance order; ties keep ascending id/index order.
template <typename PosFn>
std::vector<int> sorted_by_distance(std::vector<int> ids, Vec2 origin, PosFn position_of) {
  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(ids.size());
  for (int id : ids) keyed.emplace_back((position_of(id) - origin).squared_norm(), id);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < keyed.size(); ++k) ids[k] = keyed[k].second;
  return ids;
}

void push_slot(std::vector<double>& out, const SlotEntry& s, double pos_scale, double vel_scale) {
  out.push_back(s.rel_pos.x / pos_scale);
  out.push_back(s.rel_pos.y / pos_scale);
  out.push_back(s.rel_vel.x / vel_scale);
  out.push_back(s.rel_vel.y / vel_scale);
  out.push_back(s.valid ? 1.0 : 0.0);
}

void push_self(std::vector<double>& out, Vec2 pos, Vec2 vel, const EngagementConfig& cfg) {
  out.push_back(2.0 * pos.x / cfg.arena.width - 1.0);
  out.push_back(2.0 * pos.y / cfg.arena.height - 1.0);
  out.push_back(vel.x / cfg.v_max);
  out.push_back(vel.y / cfg.v_max);
}

}  // namespace

std::size_t LowerObservation::dim(const SlotConfig& slots) {
  return 4 + 5 * static_cast<std::size_t>(slots.allies + slots.enemies + slots.obstacles);
}

std::vector<double> LowerObservation::flatten(const EngagementConfig& cfg) const {
  std::vector<double> out;
  out.reserve(4 + 5 * (allies.size() + enemies.size() + obstacles.size()));
  push_self(out, self_pos, self_vel, cfg);
  for (const auto* group : {&allies, &enemies, &obstacles})
    for (const auto& s : *group) push_slot(out, s, cfg.sense_length, cfg.v_max);
  return out;
}

std::size_t UpperObservation::dim(const SlotConfig& slots) {
  return 5 + 6 * static_cast<std::size_t>(slots.allies) + 5 * static_cast<std::size_t>(slots.enemies);
}

std::vector<double> UpperObservation::flatten(const EngagementConfig& cfg) const {
  std::vector<double> out;
  out.reserve(5 + 6 * allies.size() + 5 * enemies.size());
  push_self(out, self_pos, self_vel, cfg);
  out.push_back(task_code(self_task) / 3.0);
  for (const auto& s : allies) {
    out.push_back(s.rel_pos.x / cfg.sense_length);
    out.push_back(s.rel_pos.y / cfg.sense_length);
    out.push_back(s.vel.x / cfg.v_max);
    out.push_back(s.vel.y / cfg.v_max);
    out.push_back(s.valid ? task_code(s.task) / 3.0 : 0.0);
    out.push_back(s.valid ? 1.0 : 0.0);
  }
  for (const auto& s : enemies) {
    out.push_back(s.rel_pos.x / cfg.sense_length);
    out.push_back(s.rel_pos.y / cfg.sense_length);
    out.push_back(s.vel.x / cfg.v_max);
    out.push_back(s.vel.y / cfg.v_max);
    out.push_back(s.valid ? 1.0 : 0.0);
  }
  return out;
}

LowerObservation build_lower_observation(const WorldState& world, int i, const SlotConfig& slots) {
  const AgentState& self = world.agents.at(static_cast<std::size_t>(i));
  LowerObservation obs;
  obs.self_pos = self.position;
  obs.self_vel = self.velocity;
  obs.allies.assign(static_cast<std::size_t>(slots.allies), {});
  obs.enemies.assign(static_cast<std::size_t>(slots.enemies), {});
  obs.obstacles.assign(static_cast<std::size_t>(slots.obstacles), {});
  if (!self.alive) return obs;

  const NeighborSets sets = neighbor_sets(world, i);
  auto agent_pos = [&](int id) { return world.agents[static_cast<std::size_t>(id)].position; };
  auto fill_agents = [&](const std::vector<int>& ids, std::vector<SlotEntry>& dst) {
    const auto order = sorted_by_distance(ids, self.position, agent_pos);
    for (std::size_t k = 0; k < dst.size() && k < order.size(); ++k) {
      const auto& other = world.agents[static_cast<std::size_t>(order[k])];
      dst[k] = {other.position - self.position, other.velocity - self.velocity, true};
    }
  };
  fill_agents(sets.allies, obs.allies);
  fill_agents(sets.enemies, obs.enemies);

  auto circle_pos = [&](int c) { return world.obstacles.circles[static_cast<std::size_t>(c)].center; };
  const auto order = sorted_by_distance(sets.obstacles, self.position, circle_pos);
  for (std::size_t k = 0; k < obs.obstacles.size() && k < order.size(); ++k)
    obs.obstacles[k] = {circle_pos(order[k]) - self.position, {}, true};
  return obs;
}

UpperObservation build_upper_observation(const WorldState& world, int i, const SlotConfig& slots) {
  const AgentState& self = world.agents.at(static_cast<std::size_t>(i));
  UpperObservation obs;
  obs.self_pos = self.position;
  obs.self_vel = self.velocity;
  obs.self_task = self.task;
  obs.allies.assign(static_cast<std::size_t>(slots.allies), {});
  obs.enemies.assign(static_cast<std::size_t>(slots.enemies), {});
  if (!self.alive) return obs;

  const NeighborSets sets = neighbor_sets(world, i);
  auto agent_pos = [&](int id) { return world.agents[static_cast<std::size_t>(id)].position; };
  const auto allies = sorted_by_distance(sets.allies, self.position, agent_pos);
  for (std::size_t k = 0; k < obs.allies.size() && k < allies.size(); ++k) {
    const auto& a = world.agents[static_cast<std::size_t>(allies[k])];
    obs.allies[k] = {a.position - self.position, a.velocity, a.task, true};
  }
  const auto enemies = sorted_by_distance(sets.enemies, self.position, agent_pos);
  for (std::size_t k = 0; k < obs.enemies.size() && k < enemies.size(); ++k) {
    const auto& e = world.agents[static_cast<std::size_t>(enemies[k])];
    obs.enemies[k] = {e.position - self.position, e.velocity, TaskKind::Searching, true};
  }
  return obs;
}

}  // namespace swarmhrl
