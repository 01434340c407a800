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
#include <fstream>
#include <numbers>
#include <sstream>

#include "swarmhrl/harness/manifest.hpp"
#include "swarmhrl/harness/replay.hpp"
#include "swarmhrl/harness/scenario.hpp"
#include "swarmhrl/policy/bundle.hpp"
#include "swarmhrl/sim/world.hpp"
#include "swarmhrl/train/episode.hpp"
#include "swarmhrl/train/metrics.hpp"
#include "test_util.hpp"

namespace swarmhrl {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void expect_same_world(const WorldState& a, const WorldState& b) {
  ASSERT_EQ(a.agents.size(), b.agents.size());
  for (std::size_t k = 0; k < a.agents.size(); ++k) {
    EXPECT_EQ(a.agents[k].position, b.agents[k].position);
    EXPECT_EQ(a.agents[k].heading, b.agents[k].heading);
  }
  ASSERT_EQ(a.obstacles.circles.size(), b.obstacles.circles.size());
  for (std::size_t k = 0; k < a.obstacles.circles.size(); ++k)
    EXPECT_EQ(a.obstacles.circles[k].center, b.obstacles.circles[k].center);
}

TEST(Scenario, SameSeedSameWorld) {
  const ScenarioSpec spec = ScenarioSpec::versus(5);
  expect_same_world(generate_scenario(spec, 7), generate_scenario(spec, 7));
  const WorldState a = generate_scenario(spec, 7), b = generate_scenario(spec, 8);
  EXPECT_NE(a.agents[0].position, b.agents[0].position);
}

TEST(Scenario, V5SpawnsFivePerTeam) {
  const WorldState w = generate_scenario(resolve_scenario("V5"), 1);
  EXPECT_EQ(w.team_size(Team::Blue), 5);
  EXPECT_EQ(w.team_size(Team::Red), 5);
  EXPECT_EQ(w.count_alive(Team::Blue), 5);
  for (std::size_t k = 0; k < w.agents.size(); ++k) EXPECT_EQ(w.agents[k].id, static_cast<int>(k));
}

// Property over seeds and sizes: no initial collision, teams 5 m apart,
// everyone inside the arena, symmetric layouts mirrored about x = W/2.
TEST(Scenario, PlacementInvariants) {
  for (int n : {1, 3, 5, 9, 20}) {
    const ScenarioSpec spec = ScenarioSpec::versus(n);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const WorldState w = generate_scenario(spec, seed);
      for (bool hit : detect_collisions(w)) ASSERT_FALSE(hit) << "n=" << n << " seed=" << seed;
      for (const auto& a : w.agents) {
        ASSERT_TRUE(w.config.arena.contains(a.position));
        for (const auto& b : w.agents)
          if (a.team != b.team) {
            ASSERT_GE((a.position - b.position).norm(), spec.min_team_separation - 1e-12);
          }
      }
      for (int k = 0; k < n; ++k) {
        const AgentState& blue = w.agents[k];
        const AgentState& red = w.agents[n + k];
        ASSERT_NEAR(red.position.x, w.config.arena.width - blue.position.x, 1e-12);
        ASSERT_EQ(red.position.y, blue.position.y);
        ASSERT_NEAR(red.heading, wrap_angle(std::numbers::pi - blue.heading), 1e-12);
      }
    }
  }
}

TEST(Scenario, JsonRoundTrip) {
  ScenarioSpec spec = ScenarioSpec::versus(4);
  spec.name = "custom";
  spec.obstacle_count = 3;
  spec.engagement.hit_prob = 0.7;
  spec.slots.enemies = 5;
  const ScenarioSpec back = scenario_from_json(scenario_to_json(spec));
  EXPECT_EQ(scenario_to_json(back), scenario_to_json(spec));
  expect_same_world(generate_scenario(spec, 3), generate_scenario(back, 3));
}

TEST(Scenario, BadInputThrowsConfigError) {
  EXPECT_THROW(resolve_scenario("V0"), ConfigError);
  EXPECT_THROW(resolve_scenario("/nonexistent/scenario.json"), ConfigError);
  ScenarioSpec spec = ScenarioSpec::versus(3);
  spec.red = 4;
  EXPECT_THROW(spec.validate(), ConfigError);
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"blue": "five"})")), ConfigError);
}

TEST(Scenario, BundledFileLoads) {
  const ScenarioSpec spec = resolve_scenario(SWARMHRL_SOURCE_DIR "/scenarios/pillars_v4.json");
  EXPECT_EQ(spec.blue, 4);
  EXPECT_EQ(spec.rectangles.size(), 6u);
  const WorldState w = generate_scenario(spec, 1);
  EXPECT_EQ(w.agents.size(), 8u);
  EXPECT_GE(w.obstacles.circles.size(), 6u);
}

TEST(Replay, OneLinePerStatePlusInitial) {
  const auto dir = test::scratch_dir("replay");
  WorldState w = generate_scenario(ScenarioSpec::versus(3), 2);
  Rng rng(1);
  std::vector<std::pair<int, int>> survivors;
  {
    ReplayWriter writer(dir / "replay.jsonl");
    writer.write(w);
    survivors.emplace_back(w.count_alive(Team::Blue), w.count_alive(Team::Red));
    std::vector<LowerAction> actions(w.agents.size());
    for (int k = 0; k < 40; ++k) {
      for (auto& a : actions) a = {test::uniform(rng, 0, 2), test::uniform(rng, -3, 3)};
      step_world(w, actions);
      writer.write(w);
      survivors.emplace_back(w.count_alive(Team::Blue), w.count_alive(Team::Red));
    }
    EXPECT_EQ(writer.lines(), 41u);
  }
  const auto frames = load_replay(dir / "replay.jsonl");
  ASSERT_EQ(frames.size(), 41u);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    EXPECT_EQ(frames[k].step, static_cast<std::int64_t>(k));
    EXPECT_EQ(frames[k].alive(Team::Blue), survivors[k].first);
    EXPECT_EQ(frames[k].alive(Team::Red), survivors[k].second);
  }
  EXPECT_EQ(frames.back().agents[0].position, w.agents[0].position);
}

TEST(Replay, MalformedThrows) {
  const auto dir = test::scratch_dir("replay_bad");
  std::ofstream(dir / "bad.jsonl") << "{\"step\": 0, \"agents\": [\n";
  EXPECT_THROW(load_replay(dir / "bad.jsonl"), ConfigError);
}

TEST(Manifest, WritesConfigHash) {
  const auto dir = test::scratch_dir("manifest") / "nested";
  RunManifest m;
  m.command = "train";
  m.argv = {"swarmhrl", "train"};
  m.seed = 42;
  m.config = {{"episodes", 3}};
  write_manifest(dir, m);
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 42u);
  EXPECT_EQ(j.at("config_hash").get<std::string>(), m.config_hash());
  EXPECT_EQ(m.config_hash().size(), 16u);
}

// Published FNV-1a 64 test vectors.
TEST(Manifest, Fnv1aVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Metrics, ZeroEpisodesGivesHeaderOnly) {
  const auto dir = test::scratch_dir("metrics");
  write_training_metrics(dir / "metrics.csv", {});
  const std::string text = slurp(dir / "metrics.csv");
  ASSERT_FALSE(text.empty());
  EXPECT_EQ(text.find('\n'), text.size() - 1);
  EXPECT_EQ(text.rfind("schema_version,episode,rollout,instance", 0), 0u);
}

TEST(Policy, SaveLoadRoundTrip) {
  Rng rng(5);
  Learner learner(3, 3, SlotConfig{}, 10, LearnerConfig{}, rng);
  const PolicyBundle bundle = learner.snapshot();
  const auto dir = test::scratch_dir("policy");
  save_policy(bundle, dir);
  const PolicyBundle back = load_policy(dir, SlotConfig{});
  ASSERT_EQ(back.actors.size(), bundle.actors.size());
  ASSERT_EQ(back.qnets.size(), bundle.qnets.size());
  EXPECT_EQ(back.h, bundle.h);
  for (std::size_t k = 0; k < bundle.actors.size(); ++k)
    for (std::size_t l = 0; l < bundle.actors[k].layers().size(); ++l)
      EXPECT_EQ(back.actors[k].layers()[l].weight, bundle.actors[k].layers()[l].weight);
  SlotConfig other;
  other.enemies = 5;
  EXPECT_THROW(load_policy(dir, other), ConfigError);
  EXPECT_THROW(load_policy(dir / "missing"), ConfigError);
}

}  // namespace
}  // namespace swarmhrl
