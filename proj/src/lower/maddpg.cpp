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

#include "swarmhrl/lower/maddpg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swarmhrl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double goal_scale(const EngagementConfig& config) { return config.sense_length; }

std::size_t actor_input_dim(const SlotConfig& slots) { return LowerObservation::dim(slots) + kGoalFeatureWidth; }

void push_goal_features(std::vector<double>& x, Vec2 offset, const EngagementConfig& config) {
  const Vec2 d = offset / goal_scale(config);
  const double n = offset.norm();
  x.push_back(d.x);
  x.push_back(d.y);
  x.push_back(n > 0.0 ? offset.x / n : 0.0);
  x.push_back(n > 0.0 ? offset.y / n : 0.0);
}

std::vector<double> actor_input(const LowerObservation& obs, Vec2 subgoal, const EngagementConfig& config) {
  std::vector<double> x = obs.flatten(config);
  push_goal_features(x, subgoal - obs.self_pos, config);
  return x;
}

std::vector<double> encode_joint_state(const WorldState& world, Team team, std::span<const Vec2> subgoals,
                                       std::span<const Vec2> starts) {
  const auto& cfg = world.config;
  const auto own = world.team_ids(team);
  const auto other = world.team_ids(opponent_of(team));
  if (subgoals.size() != own.size() || starts.size() != own.size())
    throw std::invalid_argument("encode_joint_state: one subgoal and start per agent");
  std::vector<double> s;
  s.reserve(own.size() * kTeamStateWidth + other.size() * kEnemyStateWidth);
  auto push_kinematics = [&](const AgentState& a) {
    s.push_back(2.0 * a.position.x / cfg.arena.width - 1.0);
    s.push_back(2.0 * a.position.y / cfg.arena.height - 1.0);
    s.push_back(a.velocity.x / cfg.v_max);
    s.push_back(a.velocity.y / cfg.v_max);
  };
  for (std::size_t k = 0; k < own.size(); ++k) {
    const auto& a = world.agents[static_cast<std::size_t>(own[k])];
    if (!a.alive) {
      s.insert(s.end(), kTeamStateWidth, 0.0);
      continue;
    }
    s.push_back(1.0);
    push_kinematics(a);
    push_goal_features(s, subgoals[k] - a.position, cfg);
    s.push_back((subgoals[k] - starts[k]).norm() / goal_scale(cfg));
  }
  for (int id : other) {
    const auto& a = world.agents[static_cast<std::size_t>(id)];
    if (!a.alive) {
      s.insert(s.end(), kEnemyStateWidth, 0.0);
      continue;
    }
    s.push_back(1.0);
    push_kinematics(a);
  }
  return s;
}

MatrixXd encode_actions(const MatrixXd& actions, double v_max) {
  if (actions.rows() != 2) throw std::invalid_argument("encode_actions: expected 2 x batch");
  MatrixXd f(kActionFeatureWidth, actions.cols());
  for (Eigen::Index c = 0; c < actions.cols(); ++c) {
    f(0, c) = 2.0 * actions(0, c) / v_max - 1.0;
    f(1, c) = std::cos(actions(1, c));
    f(2, c) = std::sin(actions(1, c));
  }
  return f;
}

MatrixXd backprop_actions(const MatrixXd& actions, const MatrixXd& feature_grad, double v_max) {
  MatrixXd g(2, actions.cols());
  for (Eigen::Index c = 0; c < actions.cols(); ++c) {
    g(0, c) = feature_grad(0, c) * 2.0 / v_max;
    g(1, c) = -feature_grad(1, c) * std::sin(actions(1, c)) + feature_grad(2, c) * std::cos(actions(1, c));
  }
  return g;
}

nn::Mlp make_actor(int input_dim, double v_max, Rng& rng, bool direction_head) {
  constexpr double pi = std::numbers::pi;
  auto head = direction_head ? nn::OutputHead::bounded({0.0, -1.0, -1.0}, {v_max, 1.0, 1.0})
                             : nn::OutputHead::bounded({0.0, -pi}, {v_max, pi});
  return nn::Mlp::he_uniform(nn::Mlp::standard_dims(input_dim, direction_head ? 3 : 2), std::move(head), rng);
}

bool is_direction_head(const nn::Mlp& actor) { return actor.output_dim() == 3; }

namespace {

// Direction outputs shorter than this are treated as pointing along +x.
constexpr double kMinDirectionNorm = 1e-9;

}  // namespace

LowerAction decode_action(const nn::Mlp& actor, const VectorXd& out) {
  if (!is_direction_head(actor)) return {out(0), out(1)};
  const double heading = std::hypot(out(1), out(2)) < kMinDirectionNorm ? 0.0 : std::atan2(out(2), out(1));
  return {out(0), heading};
}

MatrixXd actor_features(const nn::Mlp& actor, const MatrixXd& out, double v_max) {
  if (!is_direction_head(actor)) return encode_actions(out, v_max);
  MatrixXd f(kActionFeatureWidth, out.cols());
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double r = std::hypot(out(1, c), out(2, c));
    f(0, c) = 2.0 * out(0, c) / v_max - 1.0;
    f(1, c) = r < kMinDirectionNorm ? 1.0 : out(1, c) / r;
    f(2, c) = r < kMinDirectionNorm ? 0.0 : out(2, c) / r;
  }
  return f;
}

MatrixXd backprop_actor_features(const nn::Mlp& actor, const MatrixXd& out, const MatrixXd& feature_grad,
                                 double v_max) {
  if (!is_direction_head(actor)) return backprop_actions(out, feature_grad, v_max);
  MatrixXd g = MatrixXd::Zero(3, out.cols());
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    g(0, c) = feature_grad(0, c) * 2.0 / v_max;
    const double r = std::hypot(out(1, c), out(2, c));
    if (r < kMinDirectionNorm) continue;
    // d(u / |u|) / du = (I - n n^T) / |u|
    const Eigen::Vector2d n(out(1, c) / r, out(2, c) / r);
    const Eigen::Vector2d gn(feature_grad(1, c), feature_grad(2, c));
    const Eigen::Vector2d gu = (gn - n * n.dot(gn)) / r;
    g(1, c) = gu(0);
    g(2, c) = gu(1);
  }
  return g;
}

LowerAction select_action(const nn::Mlp& actor, std::span<const double> input, double noise_sigma, Rng& rng) {
  MatrixXd z = actor.logits(nn::as_column(input));
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> n(0.0, noise_sigma);
    for (Eigen::Index r = 0; r < z.rows(); ++r) z(r, 0) += n(rng);
  }
  return decode_action(actor, actor.apply_head(z).col(0));
}

VectorXd td_targets(const VectorXd& reward, const VectorXd& done, const VectorXd& next_q, double gamma) {
  return reward.array() + gamma * (1.0 - done.array()) * next_q.array();
}

LossAndGrad critic_gradient(const nn::Mlp& critic, const MatrixXd& inputs, const VectorXd& targets) {
  nn::ForwardCache cache;
  const MatrixXd q = critic.forward(inputs, cache);
  const double b = static_cast<double>(inputs.cols());
  const Eigen::RowVectorXd err = q.row(0) - targets.transpose();
  LossAndGrad out;
  out.loss = err.squaredNorm() / b;
  out.grads = nn::backward(critic, cache, 2.0 * err / b);
  return out;
}

LossAndGrad actor_gradient(const nn::Mlp& actor, const nn::Mlp& critic, const MatrixXd& actor_inputs,
                           MatrixXd critic_inputs, const ActionSlot& slot, const VectorXd& mask,
                           double logit_penalty) {
  nn::ForwardCache actor_cache;
  const MatrixXd a = actor.forward(actor_inputs, actor_cache);
  const MatrixXd feat = slot.speed_heading ? actor_features(actor, a, slot.v_max) : a;
  critic_inputs.middleRows(slot.row, feat.rows()) = feat;

  nn::ForwardCache critic_cache;
  const MatrixXd q = critic.forward(critic_inputs, critic_cache);
  const double count = std::max(mask.sum(), 1.0);
  LossAndGrad out;
  out.loss = -(q.row(0).transpose().array() * mask.array()).sum() / count;

  const MatrixXd upstream = (-mask / count).transpose();
  MatrixXd dx;
  nn::backward(critic, critic_cache, upstream, &dx);
  const MatrixXd dfeat = dx.middleRows(slot.row, feat.rows());
  const MatrixXd da = slot.speed_heading ? backprop_actor_features(actor, a, dfeat, slot.v_max) : dfeat;
  const MatrixXd& z = actor_cache.pre.back();
  MatrixXd dz = da.cwiseProduct(actor.head_derivative(z));
  if (logit_penalty > 0.0) {
    const Eigen::RowVectorXd w = mask.transpose() / count;
    out.loss += logit_penalty * (z.colwise().squaredNorm().array() * w.array()).sum();
    dz += 2.0 * logit_penalty * z * w.asDiagonal();
  }
  out.grads = nn::backward_logits(actor, actor_cache, std::move(dz));
  return out;
}

// ---------------------------------------------------------------------------

Maddpg::Maddpg(int n_agents, int n_enemies, int actor_dim, double v_max, MaddpgConfig config, Rng& rng)
    : n_agents_(n_agents), n_enemies_(n_enemies), actor_dim_(actor_dim), v_max_(v_max), config_(config) {
  if (n_agents < 1 || n_enemies < 1 || actor_dim < 1) throw std::invalid_argument("Maddpg: bad dimensions");
  if (config.batch < 1 || config.target_sync_interval < 1) throw std::invalid_argument("Maddpg: bad config");
  for (int i = 0; i < n_agents; ++i) {
    actors_.push_back(make_actor(actor_dim, v_max, rng, config.direction_head));
    critics_.push_back(nn::Mlp::he_uniform(nn::Mlp::standard_dims(critic_dim(), 1), nn::OutputHead::linear(), rng));
  }
  target_actors_ = actors_;
  target_critics_ = critics_;
  for (int i = 0; i < n_agents; ++i) {
    actor_opt_.push_back(nn::AdamState::for_model(actors_[static_cast<std::size_t>(i)], config.adam));
    critic_opt_.push_back(nn::AdamState::for_model(critics_[static_cast<std::size_t>(i)], config.adam));
  }
}

int Maddpg::critic_dim() const {
  return n_agents_ * (kTeamStateWidth + kActionFeatureWidth) + n_enemies_ * kEnemyStateWidth;
}

MatrixXd Maddpg::critic_inputs(int ego, const MatrixXd& states, const MatrixXd& features) const {
  const Eigen::Index b = states.cols();
  MatrixXd x(critic_dim(), b);
  Eigen::Index row = 0;
  auto order = [&](int k) { return k == 0 ? ego : (k <= ego ? k - 1 : k); };
  for (int k = 0; k < n_agents_; ++k) {
    x.middleRows(row, kTeamStateWidth) = states.middleRows(order(k) * kTeamStateWidth, kTeamStateWidth);
    row += kTeamStateWidth;
  }
  const Eigen::Index enemy_rows = static_cast<Eigen::Index>(n_enemies_) * kEnemyStateWidth;
  x.middleRows(row, enemy_rows) = states.middleRows(n_agents_ * kTeamStateWidth, enemy_rows);
  row += enemy_rows;
  for (int k = 0; k < n_agents_; ++k) {
    x.middleRows(row, kActionFeatureWidth) = features.middleRows(order(k) * kActionFeatureWidth, kActionFeatureWidth);
    row += kActionFeatureWidth;
  }
  return x;
}

LowerUpdateStats Maddpg::update(const LowerReplayBuffer& buffer, Rng& rng) {
  LowerUpdateStats stats;
  if (buffer.size() < static_cast<std::size_t>(config_.batch)) return stats;
  const auto batch = buffer.sample(static_cast<std::size_t>(config_.batch), rng);
  const Eigen::Index b = config_.batch;
  const Eigen::Index sdim = static_cast<Eigen::Index>(n_agents_) * kTeamStateWidth +
                            static_cast<Eigen::Index>(n_enemies_) * kEnemyStateWidth;

  MatrixXd s(sdim, b), s2(sdim, b);
  VectorXd reward(b), done(b);
  MatrixXd agent_reward(n_agents_, b);
  std::vector<MatrixXd> obs(static_cast<std::size_t>(n_agents_), MatrixXd(actor_dim_, b));
  std::vector<MatrixXd> obs2 = obs;
  MatrixXd alive(n_agents_, b), alive2(n_agents_, b);
  MatrixXd feats = MatrixXd::Zero(n_agents_ * kActionFeatureWidth, b);
  MatrixXd feats2 = feats;

  for (Eigen::Index c = 0; c < b; ++c) {
    const LowerTransition& t = *batch[static_cast<std::size_t>(c)];
    if (static_cast<Eigen::Index>(t.state.size()) != sdim || static_cast<Eigen::Index>(t.next_state.size()) != sdim)
      throw std::invalid_argument("Maddpg::update: transition state size mismatch");
    s.col(c) = Eigen::Map<const VectorXd>(t.state.data(), sdim);
    s2.col(c) = Eigen::Map<const VectorXd>(t.next_state.data(), sdim);
    reward(c) = t.reward;
    if (config_.per_agent_reward) {
      if (static_cast<int>(t.agent_rewards.size()) != n_agents_)
        throw std::invalid_argument("Maddpg::update: per-agent rewards missing");
      for (int i = 0; i < n_agents_; ++i) agent_reward(i, c) = t.agent_rewards[static_cast<std::size_t>(i)];
    }
    done(c) = t.done ? 1.0 : 0.0;
    for (int i = 0; i < n_agents_; ++i) {
      const auto off = static_cast<std::size_t>(i * actor_dim_);
      obs[static_cast<std::size_t>(i)].col(c) = Eigen::Map<const VectorXd>(t.obs.data() + off, actor_dim_);
      obs2[static_cast<std::size_t>(i)].col(c) = Eigen::Map<const VectorXd>(t.next_obs.data() + off, actor_dim_);
      alive(i, c) = t.alive[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      alive2(i, c) = t.next_alive[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      if (alive(i, c) > 0.0) {
        MatrixXd a(2, 1);
        a << t.actions[static_cast<std::size_t>(2 * i)], t.actions[static_cast<std::size_t>(2 * i + 1)];
        feats.block(i * kActionFeatureWidth, c, kActionFeatureWidth, 1) = encode_actions(a, v_max_);
      }
    }
  }

  for (int i = 0; i < n_agents_; ++i) {
    const nn::Mlp& target = target_actors_[static_cast<std::size_t>(i)];
    const MatrixXd f = actor_features(target, target.forward(obs2[static_cast<std::size_t>(i)]), v_max_);
    for (Eigen::Index c = 0; c < b; ++c)
      if (alive2(i, c) > 0.0) feats2.block(i * kActionFeatureWidth, c, kActionFeatureWidth, 1) = f.col(c);
  }

  double critic_loss = 0.0, actor_loss = 0.0;
  for (int i = 0; i < n_agents_; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const VectorXd next_q = target_critics_[k].forward(critic_inputs(i, s2, feats2)).row(0).transpose();
    const VectorXd y = td_targets(config_.per_agent_reward ? VectorXd(agent_reward.row(i).transpose()) : reward,
                                  done, next_q, config_.gamma);
    const LossAndGrad lg = critic_gradient(critics_[k], critic_inputs(i, s, feats), y);
    if (!std::isfinite(lg.loss) || !nn::adam_step(critics_[k], lg.grads, critic_opt_[k])) ++stats.skipped;
    critic_loss += lg.loss;
  }
  const ActionSlot slot{static_cast<Eigen::Index>(n_agents_) * kTeamStateWidth +
                            static_cast<Eigen::Index>(n_enemies_) * kEnemyStateWidth,
                        true, v_max_};
  for (int i = 0; i < n_agents_; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const VectorXd mask = alive.row(i).transpose();
    if (mask.sum() == 0.0) continue;
    const LossAndGrad lg = actor_gradient(actors_[k], critics_[k], obs[k], critic_inputs(i, s, feats), slot, mask,
                                            config_.actor_logit_penalty);
    if (!std::isfinite(lg.loss) || !nn::adam_step(actors_[k], lg.grads, actor_opt_[k])) ++stats.skipped;
    actor_loss += lg.loss;
  }

  ++gradient_steps_;
  if (config_.target_tau > 0.0 || gradient_steps_ % config_.target_sync_interval == 0) {
    const auto mode = config_.target_tau > 0.0 ? nn::SyncMode::polyak(config_.target_tau) : nn::SyncMode::hard();
    for (std::size_t k = 0; k < actors_.size(); ++k) {
      nn::sync_target(actors_[k], target_actors_[k], mode);
      nn::sync_target(critics_[k], target_critics_[k], mode);
    }
  }
  stats.critic_loss = critic_loss / n_agents_;
  stats.actor_loss = actor_loss / n_agents_;
  stats.performed = true;
  return stats;
}

}  // namespace swarmhrl
