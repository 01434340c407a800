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

#include "swarmhrl/upper/dqn.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmhrl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd dqn_targets(const nn::Mlp& online, const nn::Mlp& target, const VectorXd& reward,
                     const MatrixXd& next_obs, const std::vector<ActionMask>& next_masks, const VectorXd& done,
                     double gamma, DqnTarget kind) {
  const Eigen::Index b = reward.size();
  if (next_obs.cols() != b || static_cast<Eigen::Index>(next_masks.size()) != b || done.size() != b)
    throw std::invalid_argument("dqn_targets: batch size mismatch");
  const MatrixXd qt = target.forward(next_obs);
  const MatrixXd qo = kind == DqnTarget::Double ? online.forward(next_obs) : qt;
  VectorXd y(b);
  for (Eigen::Index c = 0; c < b; ++c) {
    const UpperAction a = greedy_action(qo.col(c), next_masks[static_cast<std::size_t>(c)]);
    y(c) = reward(c) + gamma * (1.0 - done(c)) * qt(static_cast<int>(a), c);
  }
  return y;
}

LossAndGrad dqn_gradient(const nn::Mlp& online, const MatrixXd& obs, const std::vector<int>& actions,
                         const VectorXd& targets) {
  const Eigen::Index b = obs.cols();
  if (static_cast<Eigen::Index>(actions.size()) != b || targets.size() != b)
    throw std::invalid_argument("dqn_gradient: batch size mismatch");
  nn::ForwardCache cache;
  const MatrixXd q = online.forward(obs, cache);
  MatrixXd upstream = MatrixXd::Zero(q.rows(), b);
  LossAndGrad out;
  for (Eigen::Index c = 0; c < b; ++c) {
    const int a = actions[static_cast<std::size_t>(c)];
    const double err = q(a, c) - targets(c);
    out.loss += err * err;
    upstream(a, c) = 2.0 * err / static_cast<double>(b);
  }
  out.loss /= static_cast<double>(b);
  out.grads = nn::backward(online, cache, upstream);
  return out;
}

nn::Mlp make_qnet(int input_dim, Rng& rng) {
  return nn::Mlp::he_uniform(nn::Mlp::standard_dims(input_dim, kUpperActionCount), nn::OutputHead::linear(), rng);
}

DqnAgent::DqnAgent(int input_dim, DqnConfig config, Rng& rng)
    : config_(config), online_(make_qnet(input_dim, rng)), target_(online_),
      adam_(nn::AdamState::for_model(online_, config.adam)) {
  if (config.batch < 1 || config.target_sync_interval < 1) throw std::invalid_argument("DqnAgent: bad config");
}

UpperUpdateStats DqnAgent::update(const UpperReplayBuffer& buffer, Rng& rng) {
  UpperUpdateStats stats;
  if (buffer.size() < static_cast<std::size_t>(config_.batch)) return stats;
  const auto batch = buffer.sample(static_cast<std::size_t>(config_.batch), rng);
  const Eigen::Index b = config_.batch;
  const Eigen::Index dim = online_.input_dim();
  MatrixXd obs(dim, b), next(dim, b);
  VectorXd reward(b), done(b);
  std::vector<int> actions(static_cast<std::size_t>(b));
  std::vector<ActionMask> masks(static_cast<std::size_t>(b));
  for (Eigen::Index c = 0; c < b; ++c) {
    const UpperTransition& t = *batch[static_cast<std::size_t>(c)];
    if (static_cast<Eigen::Index>(t.obs.size()) != dim || static_cast<Eigen::Index>(t.next_obs.size()) != dim)
      throw std::invalid_argument("DqnAgent::update: observation size mismatch");
    obs.col(c) = Eigen::Map<const VectorXd>(t.obs.data(), dim);
    next.col(c) = Eigen::Map<const VectorXd>(t.next_obs.data(), dim);
    reward(c) = t.reward;
    done(c) = t.done ? 1.0 : 0.0;
    actions[static_cast<std::size_t>(c)] = t.action;
    masks[static_cast<std::size_t>(c)] = t.next_mask;
  }
  const VectorXd y = dqn_targets(online_, target_, reward, next, masks, done, config_.gamma, config_.target);
  const LossAndGrad lg = dqn_gradient(online_, obs, actions, y);
  stats.loss = lg.loss;
  stats.skipped = !std::isfinite(lg.loss) || !nn::adam_step(online_, lg.grads, adam_);
  stats.performed = true;
  ++steps_;
  if (steps_ % config_.target_sync_interval == 0) nn::sync_target(online_, target_);
  return stats;
}

}  // namespace swarmhrl
