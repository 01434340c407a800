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
#include <optional>
#include <stdexcept>
#include <vector>

#include "swarmhrl/lower/maddpg.hpp"
#include "swarmhrl/opponents/team_policy.hpp"
#include "swarmhrl/policy/hrl_controller.hpp"
#include "swarmhrl/upper/dqn.hpp"

namespace swarmhrl {

class ReplayWriter;

/// Raised when updates keep producing non-finite losses. The CLI maps it to exit code 3.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LearnerConfig {
  MaddpgConfig lower;
  DqnConfig upper;
  int divergence_patience = 100;
  /// Gradient steps per scheduled update (both layers). The schedule itself,
  /// one lower update per step and one upper update per subtask, is fixed.
  int gradient_steps = 1;
};

/// Trainable networks and replay memories of the blue team.
class Learner {
 public:
  Learner(int n_blue, int n_red, const SlotConfig& slots, int h, LearnerConfig config, Rng& init_rng);

  Maddpg& lower() { return lower_; }
  const Maddpg& lower() const { return lower_; }
  std::vector<DqnAgent>& upper() { return upper_; }
  const LowerReplayBuffer& lower_buffer() const { return lower_buffer_; }
  const std::vector<UpperReplayBuffer>& upper_buffers() const { return upper_buffers_; }

  void push_lower(LowerTransition t) { lower_buffer_.push(std::move(t)); }
  void push_upper(int local, UpperTransition t) { upper_buffers_.at(static_cast<std::size_t>(local)).push(std::move(t)); }

  LowerUpdateStats update_lower(Rng& rng);
  /// Mean loss over the agents whose buffers were large enough.
  std::optional<double> update_upper(Rng& rng);

  /// Binds the live networks to a controller.
  void attach(HrlController& controller) const;
  /// Copies the current networks (and optimizer moments) into a bundle.
  PolicyBundle snapshot() const;

 private:
  void track(bool non_finite);

  LearnerConfig config_;
  SlotConfig slots_;
  int h_;
  Maddpg lower_;
  std::vector<DqnAgent> upper_;
  LowerReplayBuffer lower_buffer_;
  std::vector<UpperReplayBuffer> upper_buffers_;
  int non_finite_streak_ = 0;
};

struct EpisodeSettings {
  int steps = 300;
  double eps1 = 0.5;
  bool feedback = true;
  double epsilon = 0.0;       // upper exploration
  double action_noise = 0.0;  // lower exploration
  bool update_upper = true;   // false freezes the Q networks (updates are still counted)
};

struct EpisodeStats {
  int steps = 0;
  bool win = false;  // blue eliminated red within the step budget
  std::optional<Team> winner;
  int blue_alive = 0;
  int red_alive = 0;
  int blue_kills = 0;
  int red_kills = 0;
  double env_return = 0.0;    // sum of survivors + kills over subtasks
  double lower_return = 0.0;  // sum of per-step lower rewards
  double decision_seconds = 0.0;
  int decision_steps = 0;
  int lower_updates = 0;  // scheduled lower update calls
  int upper_updates = 0;  // scheduled upper update calls
  int lower_performed = 0;
  int upper_performed = 0;
  double critic_loss = 0.0;  // means over performed updates
  double actor_loss = 0.0;
  double q_loss = 0.0;
  bool actions_in_bounds = true;
  std::vector<int> upper_actions;  // chosen meta-actions, counts per kind
};

/// Plays one episode of `blue` (an HRL controller) against `red`. With a
/// learner, transitions are stored and the networks are updated: the lower
/// layer once per step, the upper layer at every subtask boundary t = h, 2h, ...
/// Elimination of either team ends the episode as terminal; running out of
/// steps does not and counts as a blue loss.
EpisodeStats run_episode(WorldState world, HrlController& blue, TeamPolicy& red, const EpisodeSettings& settings,
                         Rng& blue_rng, Rng& red_rng, Learner* learner = nullptr, Rng* learn_rng = nullptr,
                         ReplayWriter* replay = nullptr);

}  // namespace swarmhrl
