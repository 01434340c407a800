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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "swarmhrl/harness/scenario.hpp"
#include "swarmhrl/opponents/scripted.hpp"
#include "swarmhrl/policy/hrl_controller.hpp"
#include "swarmhrl/train/episode.hpp"
#include "test_util.hpp"

namespace swarmhrl {
namespace {

using test::add_circle;
using test::agent;
using test::make_world;
constexpr double kPi = std::numbers::pi;

bool in_bounds(const LowerAction& a, double v_max) {
  return a.speed >= 0.0 && a.speed <= v_max && a.heading >= -kPi && a.heading <= kPi;
}

TEST(Steering, StraightToGoalWithoutObstacles) {
  WorldState w = make_world({agent(0, Team::Red, {5, 5})});
  const LowerAction a = steer_toward(w, 0, {8, 9});
  EXPECT_NEAR(a.heading, std::atan2(4.0, 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(a.speed, 2.0);
  // Close to the goal the speed drops so it is not overshot.
  const LowerAction b = steer_toward(w, 0, {5.05, 5});
  EXPECT_NEAR(b.speed, 0.5, 1e-12);
}

TEST(Expert, ChasesLoneAdvantagedEnemy) {
  WorldState w = make_world({agent(0, Team::Red, {10, 10}, 0.0, {1, 0}), agent(1, Team::Blue, {13, 11})});
  ExpertRules expert;
  expert.reset(w, Team::Red);
  const AgentCommand c = expert.decide(w, 0);
  EXPECT_EQ(c.task, TaskKind::Chasing);
  EXPECT_NEAR(c.action.heading, std::atan2(1.0, 3.0), 1e-12);
}

TEST(Expert, PatrolsWithoutContacts) {
  WorldState w = make_world({agent(0, Team::Red, {10, 10}, 0.0)});
  ExpertRules expert;
  expert.reset(w, Team::Red);
  Rng rng(1);
  const auto cmds = expert.act(w, rng);
  ASSERT_EQ(cmds.size(), 1u);
  EXPECT_EQ(cmds[0].task, TaskKind::Searching);
  EXPECT_TRUE(in_bounds(cmds[0].action, w.config.v_max));
  EXPECT_GT(cmds[0].action.speed, 0.0);
}

TEST(Steering, DeflectsAroundObstacleOnTheLine) {
  WorldState w = make_world({agent(0, Team::Red, {10, 10})});
  add_circle(w, {11.0, 10.05});
  const LowerAction a = steer_toward(w, 0, {16, 10});
  EXPECT_GT(std::abs(a.heading), 0.05);
  // Deflection is away from the side the obstacle sits on.
  EXPECT_LT(a.heading, 0.0);
}

// Single enemy facing +x: the best ring point is the one maximizing -h.u,
// i.e. straight behind it.
TEST(Heuristic, PicksPointBehindEnemy) {
  for (double heading : {0.0, kPi / 2, -2.0 * kPi / 3}) {
    WorldState w = make_world({agent(0, Team::Red, {7, 10}, 0.0), agent(1, Team::Blue, {10, 10.5}, heading)});
    const auto best = HeuristicAttack::best_candidate(w, 0);
    ASSERT_EQ(best.enemy, 1);
    const Vec2 h = Vec2::from_polar(1.0, heading);
    int oracle = 0;
    double top = -1e9;
    for (int j = 0; j < HeuristicAttack::kRingSize; ++j) {
      const double s = -h.dot(Vec2::from_polar(1.0, 2 * kPi * j / HeuristicAttack::kRingSize));
      if (s > top + 1e-12) {
        top = s;
        oracle = j;
      }
    }
    EXPECT_EQ(best.index, oracle);
    EXPECT_LT((best.position - w.agents[1].position).dot(h), 0.0);
  }
}

TEST(Heuristic, SymmetricTieGoesToFirstCandidate) {
  WorldState w = make_world({agent(0, Team::Red, {7, 10}, 0.0), agent(1, Team::Blue, {10, 11}, 0.0),
                             agent(2, Team::Blue, {10, 9}, 0.0)});
  const auto best = HeuristicAttack::best_candidate(w, 0);
  EXPECT_EQ(best.enemy, 1);
  EXPECT_EQ(best.index, HeuristicAttack::kRingSize / 2);
}

TEST(Heuristic, HiddenEnemyMeansPatrol) {
  WorldState w = make_world({agent(0, Team::Red, {7, 10}, 0.0), agent(1, Team::Blue, {10, 10}, 0.0)});
  add_circle(w, {8.5, 10});
  HeuristicAttack h;
  h.reset(w, Team::Red);
  Rng rng(1);
  const auto cmds = h.act(w, rng);
  ASSERT_EQ(cmds.size(), 1u);
  EXPECT_EQ(cmds[0].task, TaskKind::Searching);
}

// Property: every scripted policy emits legal actions on random worlds.
TEST(Scripted, ActionBoundsProperty) {
  Rng rng(2);
  ExpertRules expert;
  HeuristicAttack heuristic;
  RandomPolicy random;
  for (int trial = 0; trial < 300; ++trial) {
    WorldState w;
    for (int k = 0; k < 10; ++k)
      w.agents.push_back(agent(k, k < 5 ? Team::Blue : Team::Red,
                               {test::uniform(rng, 0, 30), test::uniform(rng, 0, 20)}, test::uniform(rng, -kPi, kPi),
                               Vec2::from_polar(test::uniform(rng, 0, 2), test::uniform(rng, -kPi, kPi))));
    for (int c = 0; c < 8; ++c) add_circle(w, {test::uniform(rng, 0, 30), test::uniform(rng, 0, 20)});
    for (TeamPolicy* p : std::initializer_list<TeamPolicy*>{&expert, &heuristic, &random}) {
      p->reset(w, Team::Red);
      for (const auto& c : p->act(w, rng)) ASSERT_TRUE(in_bounds(c.action, w.config.v_max)) << p->name();
    }
  }
}

// One-sample Kolmogorov-Smirnov statistic against Uniform(lo, hi).
double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double f = (xs[k] - lo) / (hi - lo);
    d = std::max({d, (k + 1) / n - f, f - k / n});
  }
  return d;
}

TEST(Random, UniformWithinBoundsKs) {
  Rng rng(3);
  std::vector<double> speeds, headings;
  for (int k = 0; k < 10000; ++k) {
    const LowerAction a = RandomPolicy::draw(2.0, rng);
    speeds.push_back(a.speed);
    headings.push_back(a.heading);
  }
  const double critical = 1.63 / std::sqrt(10000.0);  // 1% level
  EXPECT_LT(ks_uniform(speeds, 0.0, 2.0), critical);
  EXPECT_LT(ks_uniform(headings, -kPi, kPi), critical);
}

TEST(Mirror, SymmetricFirstStepActions) {
  Rng init(4);
  Learner learner(3, 3, SlotConfig{}, 10, LearnerConfig{}, init);
  const PolicyBundle bundle = learner.snapshot();
  ControllerConfig cc;
  HrlTeamPolicy blue(bundle, cc, "blue");
  cc.reflect = true;
  HrlTeamPolicy red(bundle, cc, "red");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    WorldState w = generate_scenario(ScenarioSpec::versus(3), seed);
    blue.reset(w, Team::Blue);
    red.reset(w, Team::Red);
    Rng rb(seed), rr(seed);
    WorldState wb = w, wr = w;
    const auto cb = blue.act(wb, rb);
    const auto cr = red.act(wr, rr);
    ASSERT_EQ(cb.size(), cr.size());
    for (std::size_t k = 0; k < cb.size(); ++k) {
      EXPECT_NEAR(cb[k].action.speed, cr[k].action.speed, 1e-9) << "seed " << seed;
      EXPECT_NEAR(std::abs(wrap_angle(cr[k].action.heading - wrap_angle(kPi - cb[k].action.heading))), 0.0, 1e-9)
          << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace swarmhrl
