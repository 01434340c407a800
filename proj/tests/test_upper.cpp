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

#include <array>
#include <cmath>

#include "swarmhrl/predict/planner.hpp"
#include "swarmhrl/sim/observation.hpp"
#include "swarmhrl/upper/dqn.hpp"
#include "swarmhrl/upper/tasks.hpp"
#include "test_util.hpp"

namespace swarmhrl {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using test::agent;
using test::make_world;

UpperObservation observation_with(std::initializer_list<UpperSlot> enemies, std::initializer_list<UpperSlot> allies,
                                  Vec2 self_vel = {1, 0}) {
  UpperObservation obs;
  obs.self_pos = {10, 10};
  obs.self_vel = self_vel;
  obs.allies.assign(4, {});
  obs.enemies.assign(4, {});
  std::size_t k = 0;
  for (const auto& e : enemies) obs.enemies[k++] = e;
  k = 0;
  for (const auto& a : allies) obs.allies[k++] = a;
  return obs;
}

TEST(Mask, NothingVisibleForcesSearchOrEscape) {
  const auto m = feasible_actions(observation_with({}, {}));
  EXPECT_EQ(m, (ActionMask{false, false, true}));
}

TEST(Mask, ChaseNeedsPositiveAdvantage) {
  EXPECT_TRUE(feasible_actions(observation_with({{{3, 0}, {}, TaskKind::Searching, true}}, {}))[0]);
  EXPECT_FALSE(feasible_actions(observation_with({{{-3, 0}, {}, TaskKind::Searching, true}}, {}))[0]);
  // A stationary agent has no advantage over anyone.
  EXPECT_FALSE(feasible_actions(observation_with({{{3, 0}, {}, TaskKind::Searching, true}}, {}, {0, 0}))[0]);
}

TEST(Mask, SupportNeedsChasingOrEscapingAlly) {
  EXPECT_FALSE(feasible_actions(observation_with({}, {{{1, 0}, {}, TaskKind::Searching, true}}))[1]);
  EXPECT_FALSE(feasible_actions(observation_with({}, {{{1, 0}, {}, TaskKind::Supporting, true}}))[1]);
  EXPECT_TRUE(feasible_actions(observation_with({}, {{{1, 0}, {}, TaskKind::Escaping, true}}))[1]);
  EXPECT_TRUE(feasible_actions(observation_with({}, {{{1, 0}, {}, TaskKind::Chasing, true}}))[1]);
}

TEST(Greedy, ArgmaxOverFeasible) {
  VectorXd q(3);
  q << 5.0, 1.0, 2.0;
  EXPECT_EQ(greedy_action(q, {true, true, true}), UpperAction::Chase);
  EXPECT_EQ(greedy_action(q, {false, true, true}), UpperAction::SearchOrEscape);
  q << 1.0, 1.0, 1.0;
  EXPECT_EQ(greedy_action(q, {false, true, true}), UpperAction::Support);
  EXPECT_THROW(greedy_action(q, {false, false, false}), std::logic_error);
}

TEST(SelectTask, ZeroEpsilonIsDeterministicArgmax) {
  Rng rng(1);
  const nn::Mlp q = make_qnet(6, rng);
  const std::vector<double> in{0.1, -0.2, 0.3, 0.0, 1.0, -1.0};
  const UpperAction expected = greedy_action(q.forward(in), {true, true, true});
  Rng a(1);
  const Rng before = a;
  for (int k = 0; k < 50; ++k) EXPECT_EQ(select_task(q, in, {true, true, true}, 0.0, a), expected);
  EXPECT_EQ(a, before);  // no random numbers drawn
}

// Full exploration: empirical frequencies uniform over the feasible set, +-3% over 10^4 draws.
TEST(SelectTask, FullEpsilonIsUniformOverFeasible) {
  Rng rng(2);
  const nn::Mlp q = make_qnet(6, rng);
  const std::vector<double> in(6, 0.5);
  for (const ActionMask mask : {ActionMask{true, true, true}, ActionMask{true, false, true}}) {
    std::array<int, 3> counts{};
    const int n = 10000;
    for (int k = 0; k < n; ++k) ++counts[static_cast<std::size_t>(select_task(q, in, mask, 1.0, rng))];
    const int feasible = mask[0] + mask[1] + mask[2];
    for (int a = 0; a < 3; ++a) {
      if (!mask[static_cast<std::size_t>(a)]) {
        EXPECT_EQ(counts[static_cast<std::size_t>(a)], 0);
        continue;
      }
      EXPECT_NEAR(static_cast<double>(counts[static_cast<std::size_t>(a)]) / n, 1.0 / feasible, 0.03);
    }
  }
}

// Property: masked actions are never chosen at any epsilon.
TEST(SelectTask, MaskedNeverSelectedProperty) {
  Rng rng(3);
  const nn::Mlp q = make_qnet(6, rng);
  std::vector<double> in(6);
  for (int k = 0; k < 20000; ++k) {
    for (auto& v : in) v = test::uniform(rng, -3, 3);
    const ActionMask mask{std::bernoulli_distribution(0.5)(rng), std::bernoulli_distribution(0.5)(rng), true};
    const UpperAction a = select_task(q, in, mask, test::uniform(rng, 0, 1), rng);
    ASSERT_TRUE(mask[static_cast<std::size_t>(a)]);
  }
}

// --- subgoal resolution ----------------------------------------------------------------

TEST(Resolve, ChaseTargetsTheVisibleEnemy) {
  WorldState w = make_world({agent(0, Team::Blue, {10, 10}, 0.0, {1, 0}), agent(1, Team::Red, {13, 10.5})});
  predict::GlobalPlanner planner;
  Rng rng(1);
  const auto obs = build_upper_observation(w, 0, SlotConfig{});
  const auto r = resolve_subgoal(UpperAction::Chase, obs, w, planner, rng);
  EXPECT_EQ(r.task, TaskKind::Chasing);
  EXPECT_NEAR(r.subgoal.x, 13.0, 1e-12);
  EXPECT_NEAR(r.subgoal.y, 10.5, 1e-12);
}

TEST(Resolve, SupportPicksNearerAlly) {
  WorldState w = make_world({agent(0, Team::Blue, {10, 10}, 0.0, {1, 0}), agent(1, Team::Blue, {15, 10}),
                             agent(2, Team::Blue, {13, 10})});
  w.agents[1].task = TaskKind::Escaping;
  w.agents[2].task = TaskKind::Escaping;
  predict::GlobalPlanner planner;
  Rng rng(1);
  const auto r = resolve_subgoal(UpperAction::Support, build_upper_observation(w, 0, SlotConfig{}), w, planner, rng);
  EXPECT_EQ(r.task, TaskKind::Supporting);
  EXPECT_EQ(r.subgoal, (Vec2{13, 10}));
}

TEST(Resolve, SupportTieGoesToLowerId) {
  WorldState w = make_world({agent(0, Team::Blue, {10, 10}, 0.0, {1, 0}), agent(1, Team::Blue, {13, 11}),
                             agent(2, Team::Blue, {13, 9})});
  w.agents[1].task = TaskKind::Chasing;
  w.agents[2].task = TaskKind::Chasing;
  predict::GlobalPlanner planner;
  Rng rng(1);
  const auto r = resolve_subgoal(UpperAction::Support, build_upper_observation(w, 0, SlotConfig{}), w, planner, rng);
  EXPECT_EQ(r.subgoal, (Vec2{13, 11}));
}

TEST(Resolve, InfeasibleChaseThrows) {
  WorldState w = make_world({agent(0, Team::Blue, {10, 10}, 0.0, {1, 0})});
  predict::GlobalPlanner planner;
  Rng rng(1);
  EXPECT_THROW(resolve_subgoal(UpperAction::Chase, build_upper_observation(w, 0, SlotConfig{}), w, planner, rng),
               std::logic_error);
}

TEST(Resolve, ThreatenedAgentEscapes) {
  // Enemy ahead but we are moving away from it: negative advantage.
  WorldState w = make_world({agent(0, Team::Blue, {10, 10}, 0.0, {-1, 0}), agent(1, Team::Red, {12, 10})});
  w.agents[0].heading = 0.0;
  predict::GlobalPlanner planner;
  planner.observe(w, Team::Blue);
  Rng rng(1);
  const auto obs = build_upper_observation(w, 0, SlotConfig{});
  ASSERT_TRUE(obs.enemies[0].valid);
  const auto r = resolve_subgoal(UpperAction::SearchOrEscape, obs, w, planner, rng);
  EXPECT_EQ(r.task, TaskKind::Escaping);
  EXPECT_TRUE(w.config.arena.contains(r.subgoal));
}

// Property: every resolved Chase subgoal has positive advantage at resolution time.
TEST(Resolve, ChaseAdvantagePositiveProperty) {
  Rng rng(4);
  predict::GlobalPlanner planner;
  int resolved = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    WorldState w;
    for (int k = 0; k < 6; ++k)
      w.agents.push_back(agent(k, k < 3 ? Team::Blue : Team::Red,
                               {test::uniform(rng, 8, 22), test::uniform(rng, 6, 14)}, test::uniform(rng, -3.14, 3.14),
                               Vec2::from_polar(test::uniform(rng, 0, 2), test::uniform(rng, -3.14, 3.14))));
    const auto obs = build_upper_observation(w, 0, SlotConfig{});
    if (!feasible_actions(obs)[0]) continue;
    const auto r = resolve_subgoal(UpperAction::Chase, obs, w, planner, rng);
    ASSERT_GT(observed_advantage(w.agents[0].velocity, r.subgoal - w.agents[0].position), 0.0);
    ++resolved;
  }
  EXPECT_GT(resolved, 50);
}

// --- upper reward ---------------------------------------------------------------------------

TEST(UpperReward, Examples) {
  EXPECT_DOUBLE_EQ(upper_reward({5, 0, 0.0}, true), 5.0);
  EXPECT_DOUBLE_EQ(upper_reward({3, 2, -4.0}, true), 1.0);
  EXPECT_DOUBLE_EQ(upper_reward({3, 2, -4.0}, false), 5.0);
}

// --- DQN -------------------------------------------------------------------------------------

// Linear Q nets with hand-set weights: Q(s) = W s + b for a 1-d state.
nn::Mlp linear_q(double w0, double w1, double w2, double b0 = 0, double b1 = 0, double b2 = 0) {
  nn::Mlp q({1, 3}, nn::OutputHead::linear());
  q.layers()[0].weight << w0, w1, w2;
  q.layers()[0].bias << b0, b1, b2;
  return q;
}

TEST(DqnTargets, GammaZeroIsReward) {
  const nn::Mlp q = linear_q(1, 2, 3);
  VectorXd r(2), d = VectorXd::Zero(2);
  r << 0.5, -1.0;
  const MatrixXd s2 = MatrixXd::Ones(1, 2);
  const std::vector<ActionMask> m(2, ActionMask{true, true, true});
  EXPECT_EQ(dqn_targets(q, q, r, s2, m, d, 0.0, DqnTarget::Double), r);
}

// Online picks a* = argmax over feasible; target evaluates it.
TEST(DqnTargets, DoubleAndVanillaByHand) {
  const nn::Mlp online = linear_q(3, 1, 2);  // s'=1 -> (3, 1, 2)
  const nn::Mlp target = linear_q(1, 5, 4);  // s'=1 -> (1, 5, 4)
  VectorXd r(3), d(3);
  r << 1.0, 1.0, 1.0;
  d << 0.0, 0.0, 1.0;
  const MatrixXd s2 = MatrixXd::Ones(1, 3);
  const std::vector<ActionMask> m{{true, true, true}, {false, true, true}, {true, true, true}};
  const VectorXd yd = dqn_targets(online, target, r, s2, m, d, 0.5, DqnTarget::Double);
  EXPECT_DOUBLE_EQ(yd(0), 1.0 + 0.5 * 1.0);  // online argmax 0, target Q 1
  EXPECT_DOUBLE_EQ(yd(1), 1.0 + 0.5 * 4.0);  // feasible {1,2}: online picks 2
  EXPECT_DOUBLE_EQ(yd(2), 1.0);              // terminal
  const VectorXd yv = dqn_targets(online, target, r, s2, m, d, 0.5, DqnTarget::VanillaMax);
  EXPECT_DOUBLE_EQ(yv(0), 1.0 + 0.5 * 5.0);
  EXPECT_DOUBLE_EQ(yv(1), 1.0 + 0.5 * 5.0);
}

TEST(DqnTargets, SameNetsReduceToVanilla) {
  Rng rng(5);
  const nn::Mlp q = make_qnet(4, rng);
  std::normal_distribution<double> n;
  MatrixXd s2(4, 16);
  for (Eigen::Index k = 0; k < s2.size(); ++k) s2.data()[k] = n(rng);
  VectorXd r = VectorXd::Ones(16), d = VectorXd::Zero(16);
  std::vector<ActionMask> m(16, ActionMask{true, false, true});
  EXPECT_EQ(dqn_targets(q, q, r, s2, m, d, 0.9, DqnTarget::Double),
            dqn_targets(q, q, r, s2, m, d, 0.9, DqnTarget::VanillaMax));
}

TEST(DqnGradient, HandComputedLoss) {
  const nn::Mlp q = linear_q(1, 2, 3);  // s=2 -> (2, 4, 6)
  const MatrixXd s = MatrixXd::Constant(1, 2, 2.0);
  VectorXd y(2);
  y << 3.0, 5.0;
  const auto lg = dqn_gradient(q, s, {1, 2}, y);
  // errors: 4-3 = 1, 6-5 = 1 -> loss 1
  EXPECT_DOUBLE_EQ(lg.loss, 1.0);
  EXPECT_DOUBLE_EQ(lg.grads.layers[0].weight(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(lg.grads.layers[0].weight(1, 0), 2.0);  // 2*err/B * s
  EXPECT_DOUBLE_EQ(lg.grads.layers[0].bias(2), 1.0);
}

TEST(DqnAgent, UpdatesAfterFullBatch) {
  Rng rng(6);
  DqnConfig cfg;
  cfg.batch = 4;
  DqnAgent agent_q(3, cfg, rng);
  UpperReplayBuffer buf(10);
  for (int k = 0; k < 3; ++k) buf.push({{0.1, 0.2, 0.3}, 0, {}, 1.0, {0.0, 0.1, 0.2}, {true, true, true}, false});
  EXPECT_FALSE(agent_q.update(buf, rng).performed);
  buf.push({{0.1, 0.2, 0.3}, 2, {}, -1.0, {0.0, 0.1, 0.2}, {false, false, true}, true});
  const auto st = agent_q.update(buf, rng);
  EXPECT_TRUE(st.performed);
  EXPECT_TRUE(std::isfinite(st.loss));
  EXPECT_EQ(agent_q.gradient_steps(), 1);
}

}  // namespace
}  // namespace swarmhrl
