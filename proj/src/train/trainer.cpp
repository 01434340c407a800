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

#include "swarmhrl/train/trainer.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <numbers>

#include "swarmhrl/harness/replay.hpp"
#include "swarmhrl/opponents/scripted.hpp"
#include "swarmhrl/seeding.hpp"
#include "swarmhrl/sim/world.hpp"
#include "swarmhrl/train/metrics.hpp"

namespace swarmhrl {

namespace fs = std::filesystem;
using nlohmann::json;

void TrainConfig::validate() const {
  scenario.validate();
  predictor.validate();
  if (episodes < 1 || steps < 1 || h < 1 || instances < 1 || rollouts < 1) throw ConfigError("train: counts must be positive");
  if (!(eps1 >= 0.0 && eps1 <= 1.0)) throw ConfigError("train: eps1 must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("train: gamma must lie in [0, 1]");
  if (!(lr > 0.0)) throw ConfigError("train: learning rate must be positive");
  if (batch < 1 || buffer < static_cast<std::size_t>(batch) || target_sync < 1 || gradient_steps < 1)
    throw ConfigError("train: bad batch / buffer / target sync settings");
  if (epsilon_start < 0.0 || epsilon_start > 1.0 || epsilon_end < 0.0 || epsilon_end > 1.0)
    throw ConfigError("train: epsilon must lie in [0, 1]");
  if (noise_start < 0.0 || noise_end < 0.0) throw ConfigError("train: exploration noise must be >= 0");
  if (checkpoint_every < 0) throw ConfigError("train: checkpoint_every must be >= 0");
}

json TrainConfig::to_json() const {
  return {{"scenario", scenario_to_json(scenario)},
          {"episodes", episodes},
          {"steps", steps},
          {"h", h},
          {"instances", instances},
          {"rollouts", rollouts},
          {"seed", seed},
          {"opponent", opponent},
          {"feedback", feedback},
          {"eps1", eps1},
          {"gamma", gamma},
          {"lr", lr},
          {"batch", batch},
          {"buffer", buffer},
          {"target_sync", target_sync},
          {"gradient_steps", gradient_steps},
          {"epsilon", {epsilon_start, epsilon_end}},
          {"noise", {noise_start, noise_end}},
          {"dqn_target", dqn_target == DqnTarget::Double ? "double" : "vanilla"},
          {"update_upper", update_upper},
          {"omniscient", omniscient},
          {"predictor",
           {{"horizon", predictor.horizon},
            {"rollouts", predictor.rollouts},
            {"link_threshold", predictor.link_threshold},
            {"escape_distance", predictor.escape_distance},
            {"candidates", predictor.candidates},
            {"heading_jitter", predictor.heading_jitter}}},
          {"checkpoint_every", checkpoint_every}};
}

double TrainConfig::epsilon_at(int episode) const {
  const double span = std::max(1.0, 0.5 * episodes);
  const double frac = std::min(1.0, episode / span);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

double TrainConfig::noise_at(int episode) const {
  const double frac = episodes > 1 ? static_cast<double>(episode) / (episodes - 1) : 1.0;
  return noise_start + (noise_end - noise_start) * frac;
}

std::unique_ptr<TeamPolicy> make_opponent(const std::string& kind, const ScenarioSpec& scenario, int h,
                                          const predict::PredictorConfig& predictor, bool omniscient) {
  if (kind == "expert") return std::make_unique<ExpertRules>();
  if (kind == "heuristic") return std::make_unique<HeuristicAttack>();
  if (kind == "random") return std::make_unique<RandomPolicy>();
  const std::string prefix = "mirror:";
  if (kind.rfind(prefix, 0) == 0) {
    PolicyBundle bundle = load_policy(kind.substr(prefix.size()), scenario.slots);
    ControllerConfig cc;
    cc.h = bundle.h > 0 ? bundle.h : h;
    cc.slots = scenario.slots;
    cc.predictor = predictor;
    cc.omniscient = omniscient;
    cc.reflect = true;
    return std::make_unique<HrlTeamPolicy>(std::move(bundle), cc, "mirror");
  }
  throw ConfigError("unknown opponent '" + kind + "' (expected expert, heuristic, random or mirror:PATH)");
}

TrainResult cross_train(const TrainConfig& config, const std::optional<fs::path>& out_dir, const ProgressFn& progress) {
  config.validate();
  const ScenarioSpec& spec = config.scenario;
  auto opponent = make_opponent(config.opponent, spec, config.h, config.predictor, config.omniscient);

  LearnerConfig lc;
  lc.lower.gamma = lc.upper.gamma = config.gamma;
  lc.lower.adam.lr = lc.upper.adam.lr = config.lr;
  lc.lower.batch = lc.upper.batch = config.batch;
  lc.lower.capacity = lc.upper.capacity = config.buffer;
  lc.lower.target_sync_interval = lc.upper.target_sync_interval = config.target_sync;
  lc.gradient_steps = config.gradient_steps;
  lc.upper.target = config.dqn_target;
  Rng init_rng(derive_seed(config.seed, streams::kInit));
  Learner learner(spec.blue, spec.red, spec.slots, config.h, lc, init_rng);
  Rng learn_rng(derive_seed(config.seed, streams::kLearn));

  ControllerConfig cc;
  cc.h = config.h;
  cc.slots = spec.slots;
  cc.predictor = config.predictor;
  cc.omniscient = config.omniscient;
  HrlController blue(cc, Team::Blue);

  std::ofstream metrics, timing;
  if (out_dir) {
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir->string());
    metrics = open_output(*out_dir / "metrics.csv");
    timing = open_output(*out_dir / "timing.csv");
    write_training_header(metrics);
    write_timing_header(timing);
  }

  TrainResult result;
  for (int e = 0; e < config.episodes; ++e) {
    for (int r = 0; r < config.rollouts; ++r) {
      const auto run = static_cast<std::uint64_t>(e) * static_cast<std::uint64_t>(config.rollouts) + r;
      const int instance = static_cast<int>(run % static_cast<std::uint64_t>(config.instances));
      const std::uint64_t world_seed =
          derive_seed(config.seed, streams::kTrainInstance, static_cast<std::uint64_t>(instance));
      WorldState world = generate_scenario(spec, world_seed);
      // Fresh combat randomness every run, even when an instance repeats.
      world.rng = Rng(derive_seed(config.seed, streams::kWorld, run));
      Rng blue_rng(derive_seed(config.seed, streams::kBlue, run));
      Rng red_rng(derive_seed(config.seed, streams::kRed, run));

      EpisodeSettings es;
      es.steps = config.steps;
      es.eps1 = config.eps1;
      es.feedback = config.feedback;
      es.epsilon = config.epsilon_at(e);
      es.action_noise = config.noise_at(e);
      es.update_upper = config.update_upper;

      EpisodeRecord rec;
      rec.episode = e;
      rec.rollout = r;
      rec.instance = instance;
      rec.epsilon = es.epsilon;
      rec.noise = es.action_noise;
      rec.stats = run_episode(std::move(world), blue, *opponent, es, blue_rng, red_rng, &learner, &learn_rng);
      if (out_dir) {
        write_training_row(metrics, rec);
        write_timing_row(timing, rec);
        metrics.flush();
        timing.flush();
      }
      if (progress) progress(rec);
      result.episodes.push_back(std::move(rec));
    }
    if (out_dir && config.checkpoint_every > 0 && (e + 1) % config.checkpoint_every == 0)
      save_policy(learner.snapshot(), *out_dir / "checkpoints" / ("episode_" + std::to_string(e + 1)));
  }
  result.policy = learner.snapshot();
  if (out_dir) save_policy(result.policy, *out_dir / "checkpoint");
  return result;
}

// ---------------------------------------------------------------------------

EvalEpisode play_episode(WorldState world, TeamPolicy& blue, TeamPolicy& red, int steps, int h, Rng& blue_rng,
                         Rng& red_rng, ReplayWriter* replay) {
  using Clock = std::chrono::steady_clock;
  if (steps < 1 || h < 1) throw std::invalid_argument("play_episode: steps and h must be positive");
  blue.reset(world, Team::Blue);
  red.reset(world, Team::Red);
  const double v_max = world.config.v_max;
  auto in_bounds = [&](const LowerAction& a) {
    return a.speed >= 0.0 && a.speed <= v_max && a.heading >= -std::numbers::pi && a.heading <= std::numbers::pi;
  };

  EvalEpisode out;
  std::vector<LowerAction> actions(world.agents.size());
  int window_kills = 0;
  if (replay) replay->write(world);
  bool terminal = false;
  for (int t = 0; t < steps && !terminal; ++t) {
    std::fill(actions.begin(), actions.end(), LowerAction{});
    const auto t0 = Clock::now();
    const auto blue_cmds = blue.act(world, blue_rng);
    out.decision_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    ++out.decision_steps;
    const auto red_cmds = red.act(world, red_rng);
    for (const auto& c : blue_cmds) out.actions_in_bounds = out.actions_in_bounds && in_bounds(c.action);
    for (const auto& c : red_cmds) out.actions_in_bounds = out.actions_in_bounds && in_bounds(c.action);
    write_actions(blue_cmds, actions);
    write_actions(red_cmds, actions);

    const StepEvents ev = step_world(world, actions);
    ++out.steps;
    if (replay) replay->write(world);
    out.blue_kills += ev.kills_by(Team::Blue, world);
    out.red_kills += ev.kills_by(Team::Red, world);
    window_kills += ev.kills_by(Team::Blue, world);
    terminal = ev.terminal;
    if (ev.winner) out.winner = ev.winner;
    if (terminal || out.steps % h == 0 || out.steps == steps) {
      out.env_return += world.count_alive(Team::Blue) + window_kills;
      window_kills = 0;
    }
  }
  out.blue_alive = world.count_alive(Team::Blue);
  out.red_alive = world.count_alive(Team::Red);
  return out;
}

namespace {

void summarize(EvalResult& r) {
  const auto n = static_cast<double>(r.episodes.size());
  double ret = 0.0, secs = 0.0;
  long steps = 0;
  for (const auto& e : r.episodes) {
    if (e.winner == Team::Blue)
      ++r.wins;
    else if (e.winner == Team::Red)
      ++r.losses;
    else
      ++r.timeouts;
    ret += e.env_return;
    secs += e.decision_seconds;
    steps += e.decision_steps;
    r.actions_in_bounds = r.actions_in_bounds && e.actions_in_bounds;
  }
  if (n > 0) {
    r.win_rate = r.wins / n;
    r.mean_return = ret / n;
  }
  if (r.wins + r.losses > 0) r.decisive_share = static_cast<double>(r.wins) / (r.wins + r.losses);
  if (steps > 0) r.mean_decision_seconds = secs / static_cast<double>(steps);
}

}  // namespace

EvalResult evaluate_policy(TeamPolicy& blue, const EvalConfig& config, int h) {
  config.scenario.validate();
  if (config.instances < 1 || config.steps < 1) throw ConfigError("eval: counts must be positive");
  auto opponent = make_opponent(config.opponent, config.scenario, h, config.predictor, config.omniscient);
  if (config.replay_dir) {
    std::error_code ec;
    fs::create_directories(*config.replay_dir, ec);
    if (ec) throw ConfigError("cannot create replay directory " + config.replay_dir->string());
  }
  EvalResult result;
  for (int k = 0; k < config.instances; ++k) {
    const auto idx = static_cast<std::uint64_t>(k);
    WorldState world = generate_scenario(config.scenario, derive_seed(config.seed, streams::kEvalInstance, idx));
    Rng blue_rng(derive_seed(config.seed, streams::kBlue, idx));
    Rng red_rng(derive_seed(config.seed, streams::kRed, idx));
    std::optional<ReplayWriter> replay;
    if (config.replay_dir) replay.emplace(*config.replay_dir / ("instance_" + std::to_string(k) + ".jsonl"));
    EvalEpisode ep = play_episode(std::move(world), blue, *opponent, config.steps, h, blue_rng, red_rng,
                                  replay ? &*replay : nullptr);
    ep.instance = k;
    result.episodes.push_back(ep);
  }
  summarize(result);
  return result;
}

EvalResult evaluate(const PolicyBundle& policy, const EvalConfig& config) {
  ControllerConfig cc;
  cc.h = policy.h;
  cc.slots = config.scenario.slots;
  cc.predictor = config.predictor;
  cc.omniscient = config.omniscient;
  cc.uncertainty = config.uncertainty;
  HrlTeamPolicy blue(policy, cc);
  return evaluate_policy(blue, config, policy.h);
}

namespace {

bool is_preset_name(const std::string& name) {
  return name.size() >= 2 && (name[0] == 'V' || name[0] == 'v') &&
         std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::vector<SweepRow> generalization_sweep(const PolicyBundle& policy, const EvalConfig& config,
                                           const std::vector<int>& sizes) {
  std::vector<SweepRow> rows;
  for (int n : sizes) {
    EvalConfig c = config;
    if (is_preset_name(config.scenario.name)) {
      // Presets get the spawn bands sized for n; physics and slots carry over.
      c.scenario = ScenarioSpec::versus(n);
      c.scenario.engagement = config.scenario.engagement;
      c.scenario.slots = config.scenario.slots;
    } else {
      c.scenario.name = "V" + std::to_string(n);
      c.scenario.blue = c.scenario.red = n;
    }
    rows.push_back({n, evaluate(policy, c)});
  }
  return rows;
}

}  // namespace swarmhrl
