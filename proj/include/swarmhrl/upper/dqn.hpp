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
#include <vector>

#include "swarmhrl/lower/maddpg.hpp"
#include "swarmhrl/nn/adam.hpp"
#include "swarmhrl/replay_buffer.hpp"
#include "swarmhrl/upper/tasks.hpp"

namespace swarmhrl {

/// One subtask of one agent, spanning h steps or fewer at episode end.
struct UpperTransition {
  std::vector<double> obs;
  int action = 0;
  Vec2 subgoal;
  double reward = 0.0;
  std::vector<double> next_obs;
  ActionMask next_mask{false, false, true};
  bool done = false;
};

using UpperReplayBuffer = ReplayBuffer<UpperTransition>;

enum class DqnTarget {
  Double,     // online net picks the next action, target net evaluates it
  VanillaMax  // target net max
};

/// Per-sample targets y = r + gamma * (1 - done) * Q_target(s', a*), where a*
/// ranges over the feasible next actions only.
Eigen::VectorXd dqn_targets(const nn::Mlp& online, const nn::Mlp& target, const Eigen::VectorXd& reward,
                            const Eigen::MatrixXd& next_obs, const std::vector<ActionMask>& next_masks,
                            const Eigen::VectorXd& done, double gamma, DqnTarget kind);

/// Mean squared error between Q(s, a) and the targets.
LossAndGrad dqn_gradient(const nn::Mlp& online, const Eigen::MatrixXd& obs, const std::vector<int>& actions,
                         const Eigen::VectorXd& targets);

nn::Mlp make_qnet(int input_dim, Rng& rng);

struct DqnConfig {
  double gamma = 0.99;
  nn::AdamConfig adam;
  int batch = 64;
  std::size_t capacity = 100000;
  int target_sync_interval = 100;
  DqnTarget target = DqnTarget::Double;
};

struct UpperUpdateStats {
  double loss = 0.0;
  bool skipped = false;
  bool performed = false;
};

/// Online and target Q networks of one agent.
class DqnAgent {
 public:
  DqnAgent(int input_dim, DqnConfig config, Rng& rng);

  const nn::Mlp& online() const { return online_; }
  nn::Mlp& online() { return online_; }
  const nn::Mlp& target() const { return target_; }
  const nn::AdamState& optimizer() const { return adam_; }
  const DqnConfig& config() const { return config_; }
  std::int64_t gradient_steps() const { return steps_; }

  /// One gradient step on a uniformly sampled batch; no-op until the buffer
  /// holds a full batch.
  UpperUpdateStats update(const UpperReplayBuffer& buffer, Rng& rng);

 private:
  DqnConfig config_;
  nn::Mlp online_, target_;
  nn::AdamState adam_;
  std::int64_t steps_ = 0;
};

}  // namespace swarmhrl
