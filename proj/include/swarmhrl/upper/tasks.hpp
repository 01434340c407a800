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
#include <span>

#include "swarmhrl/nn/mlp.hpp"
#include "swarmhrl/predict/planner.hpp"
#include "swarmhrl/sim/observation.hpp"

namespace swarmhrl {

/// Discrete decision of the task-allocation layer. The concrete TaskKind is
/// only fixed when the subgoal is resolved.
enum class UpperAction : int { Chase = 0, Support = 1, SearchOrEscape = 2 };
inline constexpr int kUpperActionCount = 3;
const char* upper_action_name(UpperAction a);

using ActionMask = std::array<bool, kUpperActionCount>;

/// Cosine between the own velocity and a relative position; 0 if either is zero.
double observed_advantage(Vec2 self_vel, Vec2 rel_pos);

/// Chase needs a visible enemy with positive advantage, Support a
/// communicable ally that is chasing or escaping. SearchOrEscape is always
/// feasible.
ActionMask feasible_actions(const UpperObservation& obs);

/// Argmax over feasible entries; ties go to the lowest action index.
UpperAction greedy_action(const Eigen::VectorXd& q, const ActionMask& mask);

/// Epsilon-greedy choice restricted to the feasible set. No random numbers are
/// drawn when epsilon is 0.
UpperAction select_task(const nn::Mlp& qnet, std::span<const double> input, const ActionMask& mask,
                        double epsilon, Rng& rng);

struct ResolvedTask {
  TaskKind task = TaskKind::Searching;
  Vec2 subgoal;
};

/// Turns a meta-action into a task flag and subgoal, using only the agent's
/// observation plus the team planner. Chase targets the nearest advantaged
/// enemy, Support the nearest chasing or escaping ally; observation slots are
/// already in ascending distance (then id) order, so the first match wins.
/// SearchOrEscape escapes when some visible enemy has negative advantage and
/// searches otherwise. The subgoal is clamped to the arena.
/// Throws std::logic_error when Chase or Support has no eligible target.
ResolvedTask resolve_subgoal(UpperAction action, const UpperObservation& obs, const WorldState& world,
                             predict::GlobalPlanner& planner, Rng& rng);

/// What happened to one team during a subtask.
struct SubtaskTally {
  int survivors = 0;        // team agents alive at the end of the subtask
  int kills = 0;            // enemies removed during the subtask
  double lower_sum = 0.0;   // sum of the team's per-step lower rewards
};

/// survivors + kills, plus the lower-reward sum when feedback is on.
double upper_reward(const SubtaskTally& tally, bool feedback);

}  // namespace swarmhrl
