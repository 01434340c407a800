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

#include <vector>

#include "swarmhrl/nn/mlp.hpp"
#include "swarmhrl/opponents/team_policy.hpp"
#include "swarmhrl/policy/bundle.hpp"
#include "swarmhrl/predict/planner.hpp"
#include "swarmhrl/sim/uncertainty.hpp"
#include "swarmhrl/upper/tasks.hpp"

namespace swarmhrl {

/// Mirror image of a world about the vertical mid-line x = W/2. Team labels
/// and task flags are kept.
WorldState reflect_world(const WorldState& world);

struct ControllerConfig {
  int h = 10;
  SlotConfig slots;
  predict::PredictorConfig predictor;
  bool omniscient = false;
  /// Act in the mirrored frame, so a policy trained on the left spawn side can
  /// play from the right.
  bool reflect = false;
  UncertaintyConfig uncertainty;
};

/// A task choice taken at a subtask boundary.
struct UpperDecision {
  int id = 0;
  int local = 0;                // index within the team
  std::vector<double> obs;      // flattened upper observation
  ActionMask mask{};
  UpperAction action = UpperAction::SearchOrEscape;
  ResolvedTask resolved;
};

/// What the controller saw and did during one step. Per-agent vectors are in
/// team-local order; entries of dead agents are empty / zero.
struct ControllerStep {
  bool boundary = false;
  std::vector<UpperDecision> decisions;
  std::vector<std::vector<double>> actor_inputs;
  std::vector<AgentCommand> commands;
};

/// Runs the two-layer decision process for one team: a task allocation every
/// h steps, then a subgoal-conditioned actor every step.
class HrlController {
 public:
  HrlController(ControllerConfig config, Team team);

  /// Networks are borrowed, not owned; agent k uses net k mod count.
  void set_networks(std::vector<const nn::Mlp*> actors, std::vector<const nn::Mlp*> qnets);

  void reset(const WorldState& world);
  Team team() const { return team_; }
  const ControllerConfig& config() const { return config_; }
  int team_size() const { return static_cast<int>(ids_.size()); }
  const std::vector<int>& ids() const { return ids_; }
  bool is_boundary(const WorldState& world) const;

  /// One decision step. Writes the new task flags into `world`.
  ControllerStep step(WorldState& world, double epsilon, double action_noise, Rng& rng);

  /// Current subgoal / subtask start / task of agent `local` (world frame).
  Vec2 subgoal(int local) const;
  Vec2 subtask_start(int local) const { return starts_[static_cast<std::size_t>(local)]; }

  /// Inputs the networks would see now, without deciding anything. Dead
  /// agents get zero vectors and an all-false mask except SearchOrEscape.
  std::vector<std::vector<double>> peek_actor_inputs(const WorldState& world, Rng& rng) const;
  std::vector<std::vector<double>> peek_upper_inputs(const WorldState& world, Rng& rng,
                                                     std::vector<ActionMask>* masks) const;

  const predict::GlobalPlanner& planner() const { return planner_; }

 private:
  const nn::Mlp& actor_for(int local) const;
  const nn::Mlp& qnet_for(int local) const;
  std::vector<double> actor_input_for(const WorldState& view, int local, Rng& rng) const;

  ControllerConfig config_;
  Team team_;
  std::vector<int> ids_;
  std::vector<const nn::Mlp*> actors_, qnets_;
  predict::GlobalPlanner planner_;
  std::vector<Vec2> subgoals_;  // in the controller frame
  std::vector<Vec2> starts_;    // in the world frame
  std::int64_t start_step_ = 0;
  Arena arena_;
};

/// Greedy TeamPolicy around an HrlController holding its own networks.
class HrlTeamPolicy : public TeamPolicy {
 public:
  HrlTeamPolicy(PolicyBundle bundle, ControllerConfig config, const char* label = "hrl");
  // The controller borrows pointers into the bundle.
  HrlTeamPolicy(const HrlTeamPolicy&) = delete;
  HrlTeamPolicy& operator=(const HrlTeamPolicy&) = delete;
  const char* name() const override { return label_; }
  void reset(const WorldState& world, Team team) override;
  std::vector<AgentCommand> act(WorldState& world, Rng& rng) override;

  const PolicyBundle& bundle() const { return bundle_; }
  HrlController& controller() { return controller_; }

 private:
  void bind();

  PolicyBundle bundle_;
  ControllerConfig config_;
  HrlController controller_;
  const char* label_;
};

}  // namespace swarmhrl
