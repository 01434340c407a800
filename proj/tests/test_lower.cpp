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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gradcheck.hpp"
#include "swarmhrl/lower/maddpg.hpp"
#include "swarmhrl/lower/rewards.hpp"
#include "swarmhrl/replay_buffer.hpp"
#include "test_util.hpp"

namespace swarmhrl {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;

MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  MatrixXd m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = n(rng);
  return m;
}

// --- rewards -------------------------------------------------------------------------

TEST(Rewards, Avoidance) {
  EXPECT_EQ(avoidance_reward(true), -1.0);
  EXPECT_EQ(avoidance_reward(false), 0.0);
}

TEST(Rewards, IntrinsicExamples) {
  const Vec2 start{0, 0}, goal{4, 0};
  EXPECT_DOUBLE_EQ(intrinsic_reward(start, start, goal), -1.0);
  EXPECT_DOUBLE_EQ(intrinsic_reward(goal, start, goal), 0.0);
  EXPECT_DOUBLE_EQ(intrinsic_reward({2, 0}, start, goal), -0.5);
  // Starting on the subgoal: the floor keeps the ratio finite.
  EXPECT_DOUBLE_EQ(intrinsic_reward(goal, goal, goal), 0.0);
  EXPECT_TRUE(std::isfinite(intrinsic_reward({4.1, 0}, goal, goal)));
}

// Property: the intrinsic reward is never positive and is zero only on the subgoal.
TEST(Rewards, IntrinsicSignProperty) {
  Rng rng(1);
  for (int s = 0; s < 10000; ++s) {
    const Vec2 p{test::uniform(rng, 0, 30), test::uniform(rng, 0, 20)};
    const Vec2 p0{test::uniform(rng, 0, 30), test::uniform(rng, 0, 20)};
    const Vec2 q{test::uniform(rng, 0, 30), test::uniform(rng, 0, 20)};
    const double r = intrinsic_reward(p, p0, q);
    ASSERT_LT(r, 0.0);
    ASSERT_EQ(intrinsic_reward(q, p0, q), 0.0);
  }
}

TEST(Rewards, LowerRewardWeights) {
  const std::vector<double> ra{-1.0, 0.0, -1.0}, rb{-0.2, -0.4, -0.6};
  EXPECT_DOUBLE_EQ(lower_reward(ra, rb, 1.0), -2.0);
  EXPECT_NEAR(lower_reward(ra, rb, 0.0), -1.2, 1e-12);
  EXPECT_NEAR(lower_reward(ra, rb, 0.5), -1.6, 1e-12);
  const std::vector<double> all(5, -1.0);
  EXPECT_DOUBLE_EQ(lower_reward(all, all, 0.3), -5.0);
}

TEST(Rewards, EpisodeAvoidanceSumBounded) {
  Rng rng(2);
  const int T = 300;
  double sum = 0.0;
  for (int t = 0; t < T; ++t) sum += avoidance_reward(std::bernoulli_distribution(0.3)(rng));
  EXPECT_LE(sum, 0.0);
  EXPECT_GE(sum, -T);
}

// --- critic ---------------------------------------------------------------------------

TEST(Critic, TdTargets) {
  VectorXd r(3), d(3), q(3);
  r << 1.0, -2.0, 0.5;
  d << 0.0, 1.0, 0.0;
  q << 10.0, 10.0, -4.0;
  EXPECT_EQ(td_targets(r, d, q, 0.0), r);
  const VectorXd y = td_targets(r, d, q, 0.9);
  EXPECT_DOUBLE_EQ(y(0), 10.0);
  EXPECT_DOUBLE_EQ(y(1), -2.0);  // terminal: no bootstrap
  EXPECT_DOUBLE_EQ(y(2), 0.5 - 3.6);
}

// Q(x) = w x + b on a one-transition batch: loss (2w + b - y)^2, by hand.
TEST(Critic, HandComputedLoss) {
  nn::Mlp critic({1, 1}, nn::OutputHead::linear());
  critic.layers()[0].weight(0, 0) = 0.5;
  critic.layers()[0].bias(0) = 0.1;
  MatrixXd x(1, 1);
  x << 2.0;
  VectorXd y(1);
  y << 1.5;
  const auto lg = critic_gradient(critic, x, y);
  EXPECT_NEAR(lg.loss, 0.16, 1e-12);
  EXPECT_NEAR(lg.grads.layers[0].weight(0, 0), -1.6, 1e-12);
  EXPECT_NEAR(lg.grads.layers[0].bias(0), -0.8, 1e-12);
}

TEST(Critic, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  nn::Mlp critic = nn::Mlp::he_uniform({6, 10, 8, 1}, nn::OutputHead::linear(), rng);
  const MatrixXd x = random_matrix(6, 5, rng);
  const VectorXd y = random_matrix(5, 1, rng).col(0);
  const auto lg = critic_gradient(critic, x, y);
  auto loss = [&](const nn::Mlp& m) { return critic_gradient(m, x, y).loss; };
  const auto r = test::check_parameters(critic, lg.grads, loss, [&](const nn::Mlp& m) { return test::relu_pattern(m, x); });
  EXPECT_LT(r.max_rel_error, 1e-4);
}

// --- actor ------------------------------------------------------------------------------

TEST(Actor, ConstantCriticGivesZeroGradient) {
  Rng rng(4);
  const nn::Mlp actor = make_actor(6, 2.0, rng, false);
  nn::Mlp critic({7, 4, 1}, nn::OutputHead::linear());
  critic.layers()[1].bias(0) = 3.0;
  const MatrixXd ax = random_matrix(6, 4, rng);
  const MatrixXd cx = random_matrix(7, 4, rng);
  const auto lg = actor_gradient(actor, critic, ax, cx, {4, true, 2.0}, VectorXd::Ones(4));
  EXPECT_EQ(lg.grads.squared_norm(), 0.0);
  EXPECT_DOUBLE_EQ(lg.loss, -3.0);
}

// Loss is -(mean masked Q) for frozen nets.
TEST(Actor, LossIsNegativeMeanQ) {
  Rng rng(5);
  const nn::Mlp actor = make_actor(6, 2.0, rng, false);
  const nn::Mlp critic = nn::Mlp::he_uniform({7, 9, 1}, nn::OutputHead::linear(), rng);
  const MatrixXd ax = random_matrix(6, 4, rng);
  MatrixXd cx = random_matrix(7, 4, rng);
  VectorXd mask(4);
  mask << 1, 0, 1, 1;
  const auto lg = actor_gradient(actor, critic, ax, cx, {4, true, 2.0}, mask);
  cx.middleRows(4, 3) = actor_features(actor, actor.forward(ax), 2.0);
  const MatrixXd q = critic.forward(cx);
  EXPECT_NEAR(lg.loss, -(q(0, 0) + q(0, 2) + q(0, 3)) / 3.0, 1e-12);
}

// Critic -|a| (exact with two ReLU units) and a linear actor a = w x + b:
// loss = mean |a|, d loss / dw = mean sign(a) x.
TEST(Actor, AbsoluteValueCriticOracleAndDescent) {
  nn::Mlp critic({1, 2, 1}, nn::OutputHead::linear());
  critic.layers()[0].weight << 1.0, -1.0;
  critic.layers()[1].weight << -1.0, -1.0;
  nn::Mlp actor({2, 1}, nn::OutputHead::linear());
  actor.layers()[0].weight << 0.8, -0.3;
  actor.layers()[0].bias << 0.2;
  MatrixXd x(2, 3);
  x << 1.0, -2.0, 0.5, 0.3, 1.0, -1.0;
  const MatrixXd a = actor.forward(x);
  const ActionSlot slot{0, false, 2.0};
  const auto lg = actor_gradient(actor, critic, x, MatrixXd::Zero(1, 3), slot, VectorXd::Ones(3));
  double loss = 0.0;
  Eigen::RowVector2d dw = Eigen::RowVector2d::Zero();
  double db = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double s = a(0, c) > 0 ? 1.0 : -1.0;
    loss += std::abs(a(0, c)) / 3.0;
    dw += s * x.col(c).transpose() / 3.0;
    db += s / 3.0;
  }
  EXPECT_NEAR(lg.loss, loss, 1e-12);
  EXPECT_NEAR(lg.grads.layers[0].weight(0, 0), dw(0), 1e-12);
  EXPECT_NEAR(lg.grads.layers[0].weight(0, 1), dw(1), 1e-12);
  EXPECT_NEAR(lg.grads.layers[0].bias(0), db, 1e-12);

  nn::AdamState st = nn::AdamState::for_model(actor, {0.01});
  for (int k = 0; k < 2000; ++k)
    nn::adam_step(actor, actor_gradient(actor, critic, x, MatrixXd::Zero(1, 3), slot, VectorXd::Ones(3)).grads, st);
  EXPECT_LT(actor.forward(x).cwiseAbs().maxCoeff(), 0.05);
}

struct ActorCase {
  bool direction_head;
  double logit_penalty;
};

class ActorFiniteDifference : public ::testing::TestWithParam<ActorCase> {};

TEST_P(ActorFiniteDifference, MatchesCentralDifferences) {
  const auto [direction, penalty] = GetParam();
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    nn::Mlp actor = nn::Mlp::he_uniform({5, 8, 6, direction ? 3 : 2},
                                        direction ? nn::OutputHead::bounded({0, -1, -1}, {2, 1, 1})
                                                  : nn::OutputHead::bounded({0, -kPi}, {2, kPi}),
                                        rng);
    const nn::Mlp critic = nn::Mlp::he_uniform({9, 12, 7, 1}, nn::OutputHead::linear(), rng);
    const MatrixXd ax = random_matrix(5, 4, rng);
    const MatrixXd cx = random_matrix(9, 4, rng);
    VectorXd mask(4);
    mask << 1, 1, 0, 1;
    const ActionSlot slot{3, true, 2.0};
    const auto lg = actor_gradient(actor, critic, ax, cx, slot, mask, penalty);
    auto loss = [&](const nn::Mlp& m) { return actor_gradient(m, critic, ax, cx, slot, mask, penalty).loss; };
    auto pattern = [&](const nn::Mlp& m) {
      auto p = test::relu_pattern(m, ax);
      MatrixXd in = cx;
      in.middleRows(3, 3) = actor_features(m, m.forward(ax), 2.0);
      const auto q = test::relu_pattern(critic, in);
      p.insert(p.end(), q.begin(), q.end());
      return p;
    };
    const auto r = test::check_parameters(actor, lg.grads, loss, pattern);
    EXPECT_LT(r.max_rel_error, 1e-4) << "trial " << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(Heads, ActorFiniteDifference,
                         ::testing::Values(ActorCase{false, 0.0}, ActorCase{false, 1e-3}, ActorCase{true, 0.0},
                                           ActorCase{true, 1e-3}));

TEST(ActionFeatures, BackpropMatchesFiniteDifferences) {
  Rng rng(7);
  for (bool direction : {false, true}) {
    const nn::Mlp actor = make_actor(4, 2.0, rng, direction);
    const int dim = direction ? 3 : 2;
    MatrixXd out = random_matrix(dim, 6, rng);
    out.row(0) = out.row(0).cwiseAbs();
    const MatrixXd g = random_matrix(kActionFeatureWidth, 6, rng);
    const MatrixXd analytic = backprop_actor_features(actor, out, g, 2.0);
    const double h = 1e-6;
    for (Eigen::Index k = 0; k < out.size(); ++k) {
      MatrixXd up = out, down = out;
      up.data()[k] += h;
      down.data()[k] -= h;
      const double num = (g.cwiseProduct(actor_features(actor, up, 2.0)).sum() -
                          g.cwiseProduct(actor_features(actor, down, 2.0)).sum()) /
                         (2 * h);
      EXPECT_LT(test::relative_error(analytic.data()[k], num), 1e-6);
    }
  }
}

TEST(ActionFeatures, Encoding) {
  MatrixXd a(2, 2);
  a << 0.0, 2.0, 0.0, kPi / 2;
  const MatrixXd f = encode_actions(a, 2.0);
  EXPECT_DOUBLE_EQ(f(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(f(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(f(1, 0), 1.0);
  EXPECT_NEAR(f(1, 1), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(f(2, 1), 1.0);
}

// --- action selection ---------------------------------------------------------------------

TEST(SelectAction, NoiseFreeIsDeterministic) {
  Rng rng(8);
  const nn::Mlp actor = make_actor(10, 2.0, rng, false);
  std::vector<double> in(10, 0.3);
  Rng a(1), b(2);
  const LowerAction x = select_action(actor, in, 0.0, a);
  const LowerAction y = select_action(actor, in, 0.0, b);
  EXPECT_EQ(x.speed, y.speed);
  EXPECT_EQ(x.heading, y.heading);
}

// Property: bounds hold for 10^6 noisy draws, including absurd noise levels.
TEST(SelectAction, BoundsProperty) {
  Rng rng(9);
  const nn::Mlp angle = nn::Mlp::he_uniform({3, 4, 2}, nn::OutputHead::bounded({0, -kPi}, {2, kPi}), rng);
  const nn::Mlp dir = nn::Mlp::he_uniform({3, 4, 3}, nn::OutputHead::bounded({0, -1, -1}, {2, 1, 1}), rng);
  std::vector<double> in(3);
  for (int s = 0; s < 1000000; ++s) {
    for (auto& v : in) v = test::uniform(rng, -5, 5);
    const double sigma = s % 2 ? 0.3 : 1e3;
    const LowerAction a = select_action(s % 3 ? angle : dir, in, sigma, rng);
    ASSERT_TRUE(a.speed >= 0.0 && a.speed <= 2.0);
    ASSERT_TRUE(a.heading >= -kPi && a.heading <= kPi);
  }
}

TEST(GoalFeatures, OffsetAndUnitVector) {
  EngagementConfig cfg;
  std::vector<double> x;
  push_goal_features(x, {3.0, 4.0}, cfg);
  ASSERT_EQ(x.size(), static_cast<std::size_t>(kGoalFeatureWidth));
  EXPECT_DOUBLE_EQ(x[0], 0.6);
  EXPECT_DOUBLE_EQ(x[1], 0.8);
  EXPECT_DOUBLE_EQ(x[2], 0.6);
  EXPECT_DOUBLE_EQ(x[3], 0.8);
  x.clear();
  push_goal_features(x, {0.0, 0.0}, cfg);
  EXPECT_EQ(x, std::vector<double>(4, 0.0));
}

// --- replay buffer --------------------------------------------------------------------------

TEST(ReplayBuffer, CapacityAndFifo) {
  ReplayBuffer<int> buf(5);
  for (int k = 0; k < 12; ++k) {
    buf.push(k);
    ASSERT_LE(buf.size(), 5u);
  }
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(buf[k], static_cast<int>(7 + k));
  EXPECT_THROW(ReplayBuffer<int>(0), std::invalid_argument);
  Rng rng(1);
  EXPECT_THROW(ReplayBuffer<int>(3).sample_indices(1, rng), std::logic_error);
}

// Chi-square goodness of fit of sampled indices against uniform; 49 dof,
// critical value 76.15 at the 1% level.
TEST(ReplayBuffer, SamplingIsUniform) {
  ReplayBuffer<int> buf(50);
  for (int k = 0; k < 80; ++k) buf.push(k);
  Rng rng(12);
  std::vector<int> counts(50, 0);
  const int n = 100000;
  for (std::size_t k : buf.sample_indices(n, rng)) ++counts[k];
  const double expected = static_cast<double>(n) / 50;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 76.15);
}

// --- MADDPG update --------------------------------------------------------------------------

LowerTransition random_transition(int agents, int enemies, int actor_dim, Rng& rng) {
  LowerTransition t;
  const int sdim = agents * kTeamStateWidth + enemies * kEnemyStateWidth;
  auto fill = [&](std::vector<double>& v, int n) {
    v.resize(static_cast<std::size_t>(n));
    for (auto& x : v) x = test::uniform(rng, -1, 1);
  };
  fill(t.state, sdim);
  fill(t.next_state, sdim);
  fill(t.obs, agents * actor_dim);
  fill(t.next_obs, agents * actor_dim);
  for (int i = 0; i < agents; ++i) {
    t.actions.push_back(test::uniform(rng, 0, 2));
    t.actions.push_back(test::uniform(rng, -kPi, kPi));
  }
  t.alive.assign(static_cast<std::size_t>(agents), 1);
  t.next_alive = t.alive;
  fill(t.agent_rewards, agents);
  for (double r : t.agent_rewards) t.reward += r;
  return t;
}

TEST(Maddpg, WaitsForFullBatchThenUpdates) {
  Rng rng(13);
  MaddpgConfig cfg;
  cfg.batch = 8;
  cfg.target_sync_interval = 3;
  Maddpg m(2, 2, 6, 2.0, cfg, rng);
  LowerReplayBuffer buf(100);
  for (int k = 0; k < 7; ++k) buf.push(random_transition(2, 2, 6, rng));
  EXPECT_FALSE(m.update(buf, rng).performed);
  buf.push(random_transition(2, 2, 6, rng));
  const nn::Mlp before = m.actors()[0];
  for (int k = 0; k < 5; ++k) {
    const auto st = m.update(buf, rng);
    ASSERT_TRUE(st.performed);
    ASSERT_TRUE(std::isfinite(st.critic_loss));
  }
  EXPECT_EQ(m.gradient_steps(), 5);
  EXPECT_NE(m.actors()[0].layers()[0].weight, before.layers()[0].weight);
}

TEST(Maddpg, CriticInputsPutEgoFirst) {
  Rng rng(14);
  Maddpg m(3, 1, 4, 2.0, {}, rng);
  const int sdim = 3 * kTeamStateWidth + kEnemyStateWidth;
  MatrixXd s(sdim, 1);
  for (int k = 0; k < sdim; ++k) s(k, 0) = k;
  MatrixXd f(3 * kActionFeatureWidth, 1);
  for (int k = 0; k < f.rows(); ++k) f(k, 0) = 100 + k;
  const MatrixXd x = m.critic_inputs(2, s, f);
  EXPECT_EQ(x(0, 0), 2 * kTeamStateWidth);
  EXPECT_EQ(x(kTeamStateWidth, 0), 0);
  EXPECT_EQ(x(2 * kTeamStateWidth, 0), kTeamStateWidth);
  EXPECT_EQ(x(sdim, 0), 100 + 2 * kActionFeatureWidth);
}

}  // namespace
}  // namespace swarmhrl
