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
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmhrl/harness/scenario.hpp"
#include "swarmhrl/policy/bundle.hpp"
#include "swarmhrl/predict/predictor.hpp"
#include "swarmhrl/sim/uncertainty.hpp"
#include "swarmhrl/train/episode.hpp"

namespace swarmhrl {

struct TrainConfig {
  ScenarioSpec scenario = ScenarioSpec::versus(3);
  int episodes = 60;
  int steps = 300;
  int h = 10;
  int instances = 100;
  int rollouts = 1;  // instances played per episode, sharing that episode's exploration schedule
  std::uint64_t seed = 1;
  std::string opponent = "random";
  bool feedback = true;
  double eps1 = 0.5;
  double gamma = 0.99;
  double lr = 1e-3;
  int batch = 64;
  std::size_t buffer = 100000;
  int target_sync = 100;
  int gradient_steps = 1;  // per scheduled update
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double noise_start = 0.3;
  double noise_end = 0.05;
  DqnTarget dqn_target = DqnTarget::Double;
  bool update_upper = true;
  bool omniscient = false;
  predict::PredictorConfig predictor;
  int checkpoint_every = 0;  // episodes; 0 keeps only the final checkpoint

  /// Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;

  /// Upper exploration: linear from start to end over the first half of training.
  double epsilon_at(int episode) const;
  /// Lower exploration noise: linear from start to end over all of training.
  double noise_at(int episode) const;
};

struct EpisodeRecord {
  int episode = 0;
  int rollout = 0;
  int instance = 0;
  double epsilon = 0.0;
  double noise = 0.0;
  EpisodeStats stats;
};

struct TrainResult {
  PolicyBundle policy;
  std::vector<EpisodeRecord> episodes;
};

/// Builds an opponent from "expert", "heuristic", "random" or "mirror:PATH".
/// Mirror checkpoints act in the reflected frame. Throws ConfigError.
std::unique_ptr<TeamPolicy> make_opponent(const std::string& kind, const ScenarioSpec& scenario, int h,
                                          const predict::PredictorConfig& predictor, bool omniscient);

using ProgressFn = std::function<void(const EpisodeRecord&)>;

/// Alternating training of both layers. Rollout r of episode e plays training
/// instance (e * rollouts + r) mod instances. When `out_dir` is set it receives metrics.csv,
/// timing.csv, checkpoint/ and, if requested, checkpoints/episode_<e>/.
/// Throws DivergenceError when updates stay non-finite.
TrainResult cross_train(const TrainConfig& config, const std::optional<std::filesystem::path>& out_dir = {},
                        const ProgressFn& progress = {});

struct EvalConfig {
  ScenarioSpec scenario = ScenarioSpec::versus(3);
  int instances = 100;
  int steps = 300;
  std::uint64_t seed = 1;
  std::string opponent = "random";
  UncertaintyConfig uncertainty;
  bool omniscient = false;
  predict::PredictorConfig predictor;
  /// When set, one replay file per instance is written here.
  std::optional<std::filesystem::path> replay_dir;
};

struct EvalEpisode {
  int instance = 0;
  int steps = 0;
  std::optional<Team> winner;
  int blue_alive = 0;
  int red_alive = 0;
  int blue_kills = 0;
  int red_kills = 0;
  double env_return = 0.0;
  double decision_seconds = 0.0;
  int decision_steps = 0;
  bool actions_in_bounds = true;
};

struct EvalResult {
  std::vector<EvalEpisode> episodes;
  int wins = 0;
  int losses = 0;
  int timeouts = 0;
  double win_rate = 0.0;        // wins / episodes; timeouts count as losses
  double decisive_share = 0.0;  // wins / (wins + losses), 0 when nothing was decided
  double mean_return = 0.0;
  double mean_decision_seconds = 0.0;  // per step, blue team, allocation + planning
  bool actions_in_bounds = true;
};

/// One episode between two team policies; blue decision time is the time spent
/// in blue.act. The return is the sum over h-step windows of blue survivors
/// plus kills.
EvalEpisode play_episode(WorldState world, TeamPolicy& blue, TeamPolicy& red, int steps, int h, Rng& blue_rng,
                         Rng& red_rng, ReplayWriter* replay = nullptr);

/// Greedy evaluation of a trained policy on fresh instances.
EvalResult evaluate(const PolicyBundle& policy, const EvalConfig& config);
/// Same with an arbitrary blue policy.
EvalResult evaluate_policy(TeamPolicy& blue, const EvalConfig& config, int h);

struct SweepRow {
  int size = 0;
  EvalResult result;
};

/// Evaluates one checkpoint on n-versus-n variants of `config.scenario`. A
/// "V<k>" preset is replaced by the n-versus-n preset layout.
std::vector<SweepRow> generalization_sweep(const PolicyBundle& policy, const EvalConfig& config,
                                           const std::vector<int>& sizes);

}  // namespace swarmhrl
