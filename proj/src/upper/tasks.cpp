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

#include "swarmhrl/upper/tasks.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace swarmhrl {

const char* upper_action_name(UpperAction a) {
  switch (a) {
    case UpperAction::Chase: return "chase";
    case UpperAction::Support: return "support";
    case UpperAction::SearchOrEscape: return "search_or_escape";
  }
  return "?";
}

double observed_advantage(Vec2 self_vel, Vec2 rel_pos) {
  const double n = self_vel.norm() * rel_pos.norm();
  if (n == 0.0) return 0.0;
  return std::clamp(self_vel.dot(rel_pos) / n, -1.0, 1.0);
}

namespace {

bool supportable(TaskKind t) { return t == TaskKind::Chasing || t == TaskKind::Escaping; }

}  // namespace

ActionMask feasible_actions(const UpperObservation& obs) {
  ActionMask m{false, false, true};
  for (const auto& e : obs.enemies)
    if (e.valid && observed_advantage(obs.self_vel, e.rel_pos) > 0.0) m[0] = true;
  for (const auto& a : obs.allies)
    if (a.valid && supportable(a.task)) m[1] = true;
  return m;
}

UpperAction greedy_action(const Eigen::VectorXd& q, const ActionMask& mask) {
  int best = -1;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kUpperActionCount; ++a) {
    if (!mask[static_cast<std::size_t>(a)]) continue;
    if (best < 0 || q(a) > best_q) {
      best = a;
      best_q = q(a);
    }
  }
  if (best < 0) throw std::logic_error("greedy_action: empty feasible set");
  return static_cast<UpperAction>(best);
}

UpperAction select_task(const nn::Mlp& qnet, std::span<const double> input, const ActionMask& mask,
                        double epsilon, Rng& rng) {
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < epsilon) {
      int options[kUpperActionCount];
      int n = 0;
      for (int a = 0; a < kUpperActionCount; ++a)
        if (mask[static_cast<std::size_t>(a)]) options[n++] = a;
      std::uniform_int_distribution<int> pick(0, n - 1);
      return static_cast<UpperAction>(options[pick(rng)]);
    }
  }
  return greedy_action(qnet.forward(input), mask);
}

ResolvedTask resolve_subgoal(UpperAction action, const UpperObservation& obs, const WorldState& world,
                             predict::GlobalPlanner& planner, Rng& rng) {
  const Arena& arena = world.config.arena;
  switch (action) {
    case UpperAction::Chase:
      for (const auto& e : obs.enemies)
        if (e.valid && observed_advantage(obs.self_vel, e.rel_pos) > 0.0)
          return {TaskKind::Chasing, arena.clamp(obs.self_pos + e.rel_pos)};
      throw std::logic_error("resolve_subgoal: chase without an advantaged enemy");
    case UpperAction::Support:
      for (const auto& a : obs.allies)
        if (a.valid && supportable(a.task)) return {TaskKind::Supporting, arena.clamp(obs.self_pos + a.rel_pos)};
      throw std::logic_error("resolve_subgoal: support without an eligible ally");
    case UpperAction::SearchOrEscape:
      break;
  }
  bool threatened = false;
  for (const auto& e : obs.enemies)
    if (e.valid && observed_advantage(obs.self_vel, e.rel_pos) < 0.0) threatened = true;
  if (threatened) return {TaskKind::Escaping, arena.clamp(planner.escape_goal(world, obs.self_pos, rng))};
  return {TaskKind::Searching, arena.clamp(planner.search_goal(world, obs.self_pos, rng))};
}

double upper_reward(const SubtaskTally& tally, bool feedback) {
  const double env = static_cast<double>(tally.survivors + tally.kills);
  return feedback ? env + tally.lower_sum : env;
}

}  // namespace swarmhrl
