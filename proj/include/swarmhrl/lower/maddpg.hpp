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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "swarmhrl/nn/adam.hpp"
#include "swarmhrl/nn/mlp.hpp"
#include "swarmhrl/replay_buffer.hpp"
#include "swarmhrl/sim/observation.hpp"
#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

/// A subgoal position issued by the upper layer and held for one subtask.
struct Subgoal {
  Vec2 target;
  std::int64_t issued_at = 0;
};

// ---------------------------------------------------------------------------
// Encodings shared by actors and critics.

/// Scale applied to subgoal offsets: the sensing length.
double goal_scale(const EngagementConfig& config);

/// Subgoal features: (q - p) / goal_scale and the unit vector toward q
/// (zero at the subgoal).
inline constexpr int kGoalFeatureWidth = 4;
void push_goal_features(std::vector<double>& x, Vec2 offset, const EngagementConfig& config);

/// Actor input: flattened lower observation followed by the subgoal features.
std::vector<double> actor_input(const LowerObservation& obs, Vec2 subgoal, const EngagementConfig& config);
std::size_t actor_input_dim(const SlotConfig& slots);

/// Ground-truth joint state for centralized critics. Per team agent (ascending
/// id): alive, position (normalized), velocity / v_max, subgoal features,
/// |q - p_start| / goal_scale; then per enemy: alive, position, velocity.
/// Dead agents are all zeros. The subtask start distance makes the intrinsic
/// reward a function of the critic's input.
std::vector<double> encode_joint_state(const WorldState& world, Team team, std::span<const Vec2> subgoals,
                                       std::span<const Vec2> starts);
inline constexpr int kTeamStateWidth = 6 + kGoalFeatureWidth;
inline constexpr int kEnemyStateWidth = 5;

/// Actor output (speed, heading) -> critic action features
/// (2 * speed / v_max - 1, cos heading, sin heading).
inline constexpr int kActionFeatureWidth = 3;
Eigen::MatrixXd encode_actions(const Eigen::MatrixXd& actions, double v_max);
/// Gradient w.r.t. (speed, heading) given the gradient w.r.t. the features.
Eigen::MatrixXd backprop_actions(const Eigen::MatrixXd& actions, const Eigen::MatrixXd& feature_grad,
                                 double v_max);

/// Actor networks come in two layouts. The angle head emits (speed, heading)
/// with heading squashed into [-pi, pi]. The direction head emits
/// (speed, ux, uy) with ux, uy in [-1, 1] and heading = atan2(uy, ux); it has
/// no seam at +-pi and no saturated logits for backward-pointing goals.
nn::Mlp make_actor(int input_dim, double v_max, Rng& rng, bool direction_head = true);
bool is_direction_head(const nn::Mlp& actor);

/// Raw actor outputs (one column per sample) -> (speed, heading).
LowerAction decode_action(const nn::Mlp& actor, const Eigen::VectorXd& out);
/// Raw actor outputs -> critic action features, and its backward pass.
Eigen::MatrixXd actor_features(const nn::Mlp& actor, const Eigen::MatrixXd& out, double v_max);
Eigen::MatrixXd backprop_actor_features(const nn::Mlp& actor, const Eigen::MatrixXd& out,
                                        const Eigen::MatrixXd& feature_grad, double v_max);

/// Evaluates the actor; Gaussian noise of std `noise_sigma` is added to the
/// logits before squashing, so the action always respects the bounds.
LowerAction select_action(const nn::Mlp& actor, std::span<const double> input, double noise_sigma, Rng& rng);

// ---------------------------------------------------------------------------
// Replay.

/// One environment step of the learning team. Per-agent blocks are stored in
/// ascending team-local order.
struct LowerTransition {
  std::vector<double> state;
  std::vector<double> obs;      // n_agents x actor_dim
  std::vector<double> actions;  // n_agents x 2 (speed, heading); zeros when dead
  std::vector<std::uint8_t> alive;
  double reward = 0.0;                // team reward R_l
  std::vector<double> agent_rewards;  // per-agent terms of R_l (optional)
  std::vector<double> next_state;
  std::vector<double> next_obs;
  std::vector<std::uint8_t> next_alive;
  bool done = false;
};

using LowerReplayBuffer = ReplayBuffer<LowerTransition>;

// ---------------------------------------------------------------------------
// Gradient primitives, usable with arbitrary network shapes.

struct LossAndGrad {
  double loss = 0.0;
  nn::Gradients grads;
};

/// Mean squared TD error of `critic` against
/// y = reward + gamma * (1 - done) * target_next_q.
LossAndGrad critic_gradient(const nn::Mlp& critic, const Eigen::MatrixXd& inputs,
                            const Eigen::VectorXd& targets);
Eigen::VectorXd td_targets(const Eigen::VectorXd& reward, const Eigen::VectorXd& done,
                           const Eigen::VectorXd& next_q, double gamma);

/// Row block that an actor's output feeds into the critic input.
struct ActionSlot {
  Eigen::Index row = 0;
  bool speed_heading = true;  // false: the raw actor output is copied verbatim
  double v_max = 2.0;
};

/// Deterministic policy gradient of loss = -mean_{mask} Q(critic_inputs with
/// the slot replaced by actor(actor_inputs)). `mask` weights samples (1 keeps,
/// 0 drops); the critic is not modified. A positive `logit_penalty` adds
/// logit_penalty * mean_{mask} ||z||^2 over the actor's pre-head logits z,
/// which keeps the tanh head out of saturation.
LossAndGrad actor_gradient(const nn::Mlp& actor, const nn::Mlp& critic, const Eigen::MatrixXd& actor_inputs,
                           Eigen::MatrixXd critic_inputs, const ActionSlot& slot, const Eigen::VectorXd& mask,
                           double logit_penalty = 0.0);

// ---------------------------------------------------------------------------

struct MaddpgConfig {
  double gamma = 0.99;
  nn::AdamConfig adam;
  int batch = 64;
  std::size_t capacity = 100000;
  int target_sync_interval = 100;
  /// > 0 switches to a Polyak average with this factor after every update.
  double target_tau = 0.0;
  bool direction_head = false;
  /// Train critic i on agent i's own term of R_l instead of the team sum.
  bool per_agent_reward = true;
  double actor_logit_penalty = 1e-3;
};

struct LowerUpdateStats {
  double critic_loss = 0.0;  // mean over agents
  double actor_loss = 0.0;
  int skipped = 0;           // non-finite updates
  bool performed = false;
};

/// Per-agent actors and centralized critics with hard-synced targets.
class Maddpg {
 public:
  Maddpg(int n_agents, int n_enemies, int actor_dim, double v_max, MaddpgConfig config, Rng& rng);

  int agents() const { return n_agents_; }
  int enemies() const { return n_enemies_; }
  int actor_dim() const { return actor_dim_; }
  int critic_dim() const;
  const MaddpgConfig& config() const { return config_; }

  const std::vector<nn::Mlp>& actors() const { return actors_; }
  const std::vector<nn::Mlp>& critics() const { return critics_; }
  std::vector<nn::Mlp>& actors() { return actors_; }
  std::vector<nn::Mlp>& critics() { return critics_; }
  const std::vector<nn::AdamState>& actor_optimizers() const { return actor_opt_; }
  const std::vector<nn::AdamState>& critic_optimizers() const { return critic_opt_; }
  std::int64_t gradient_steps() const { return gradient_steps_; }

  /// Critic input for agent `ego`: team blocks reordered so `ego` comes first.
  Eigen::MatrixXd critic_inputs(int ego, const Eigen::MatrixXd& states, const Eigen::MatrixXd& action_features) const;

  /// Samples one batch and runs every critic update, then every actor update.
  /// Does nothing until the buffer holds at least one batch.
  LowerUpdateStats update(const LowerReplayBuffer& buffer, Rng& rng);

 private:
  int n_agents_;
  int n_enemies_;
  int actor_dim_;
  double v_max_;
  MaddpgConfig config_;
  std::vector<nn::Mlp> actors_, critics_, target_actors_, target_critics_;
  std::vector<nn::AdamState> actor_opt_, critic_opt_;
  std::int64_t gradient_steps_ = 0;
};

}  // namespace swarmhrl
