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

// Command-line entry point: scenario generation, training, evaluation and
// generalization sweeps.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "swarmhrl/harness/manifest.hpp"
#include "swarmhrl/harness/scenario.hpp"
#include "swarmhrl/policy/bundle.hpp"
#include "swarmhrl/train/metrics.hpp"
#include "swarmhrl/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace swarmhrl;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct CommonOptions {
  std::string scenario = "V3";
  std::uint64_t seed = 1;
  std::string opponent = "random";
  std::string out = "run";
  int h = 10;
  int steps = 300;
  bool omniscient = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario, "Preset V<n> or scenario JSON file")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
}

void add_play(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--opponent", o.opponent, "expert | heuristic | random | mirror:PATH")->capture_default_str();
  cmd->add_option("--steps", o.steps, "Steps per episode")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_flag("--omniscient-planner", o.omniscient, "Let the planner track every enemy");
}

void configure_logging() {
  const char* env = std::getenv("SWARMHRL_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");
}

RunManifest manifest_for(const std::string& command, int argc, char** argv, std::uint64_t seed, json config,
                         std::vector<std::string> outputs) {
  RunManifest m;
  m.command = command;
  m.argv.assign(argv, argv + argc);
  m.seed = seed;
  m.config = std::move(config);
  m.outputs = std::move(outputs);
  return m;
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  const auto dash = s.find('-');
  try {
    if (dash != std::string::npos) {
      const int lo = std::stoi(s.substr(0, dash)), hi = std::stoi(s.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    }
  } catch (const std::exception&) {
    throw ConfigError("bad --sizes '" + s + "' (expected LO-HI or a comma list)");
  }
  if (out.empty()) throw ConfigError("--sizes is empty");
  for (int n : out)
    if (n < 1) throw ConfigError("--sizes entries must be >= 1");
  return out;
}

json world_to_json(const WorldState& w) {
  json agents = json::array(), rects = json::array();
  for (const auto& a : w.agents)
    agents.push_back({{"id", a.id}, {"team", team_name(a.team)}, {"x", a.position.x}, {"y", a.position.y},
                      {"heading", a.heading}});
  for (const auto& r : w.obstacles.rectangles)
    rects.push_back({{"center", {r.center.x, r.center.y}}, {"width", r.width}, {"height", r.height}});
  return {{"agents", agents}, {"rectangles", rects}, {"circles", w.obstacles.circles.size()}};
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"swarmhrl: hierarchical multi-agent swarm confrontation"};
  app.require_subcommand(1);
  // "-h" is left free so that "--h" can name the subtask length.
  app.set_help_flag("--help", "Print this help message and exit");

  CommonOptions gen_opts;
  auto* gen = app.add_subcommand("scenario", "Generate one scenario instance and write it as JSON");
  add_common(gen, gen_opts);

  CommonOptions train_opts;
  TrainConfig tc;
  auto* train = app.add_subcommand("train", "Cross-train both layers");
  add_common(train, train_opts);
  add_play(train, train_opts);
  train->add_option("--h", train_opts.h, "Subtask length in steps")->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--eps1", tc.eps1, "Avoidance weight of the lower reward")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  train->add_flag("--no-feedback", "Drop lower rewards from the upper reward");
  train->add_option("--episodes", tc.episodes, "Training episodes")->capture_default_str();
  train->add_option("--instances", tc.instances, "Training instances, cycled")->capture_default_str();
  train->add_option("--rollouts", tc.rollouts, "Instances played per episode")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train->add_option("--checkpoint-every", tc.checkpoint_every, "Snapshot period in episodes (0: final only)");
  train->add_option("--gradient-steps", tc.gradient_steps, "Gradient steps per scheduled update")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train->add_flag("--vanilla-dqn", "Use the plain max target instead of double DQN");

  CommonOptions eval_opts;
  EvalConfig ec;
  std::string checkpoint;
  bool write_replays = false;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint greedily");
  add_common(eval, eval_opts);
  add_play(eval, eval_opts);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  eval->add_option("--instances", ec.instances, "Evaluation instances")->capture_default_str();
  eval->add_option("--loss-rate", ec.uncertainty.loss_rate, "Ally message loss probability")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--noise-sigma", ec.uncertainty.noise_sigma, "Relative observation noise")->check(CLI::NonNegativeNumber);
  eval->add_flag("--replay", write_replays, "Write one JSONL replay per instance");

  CommonOptions sweep_opts;
  EvalConfig sc;
  std::string sweep_checkpoint, sizes = "10-20";
  auto* sweep = app.add_subcommand("sweep", "Evaluate a checkpoint on larger team sizes");
  add_common(sweep, sweep_opts);
  add_play(sweep, sweep_opts);
  sweep->add_option("--checkpoint", sweep_checkpoint, "Checkpoint directory")->required();
  sweep->add_option("--sizes", sizes, "LO-HI or comma list")->capture_default_str();
  sweep->add_option("--instances", sc.instances, "Instances per size")->capture_default_str();
  sweep->add_option("--loss-rate", sc.uncertainty.loss_rate, "Ally message loss probability")->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--noise-sigma", sc.uncertainty.noise_sigma, "Relative observation noise")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) {
      const fs::path out = gen_opts.out;
      const ScenarioSpec spec = resolve_scenario(gen_opts.scenario);
      write_manifest(out, manifest_for("scenario", argc, argv, gen_opts.seed, scenario_to_json(spec), {"world.json"}));
      const WorldState world = generate_scenario(spec, gen_opts.seed);
      auto os = open_output(out / "world.json");
      os << json{{"scenario", scenario_to_json(spec)}, {"seed", gen_opts.seed}, {"world", world_to_json(world)}}.dump(2)
         << '\n';
      spdlog::info("wrote {} ({} blue, {} red, {} obstacle circles)", (out / "world.json").string(), spec.blue,
                   spec.red, world.obstacles.circles.size());
    } else if (*train) {
      tc.scenario = resolve_scenario(train_opts.scenario);
      tc.seed = train_opts.seed;
      tc.opponent = train_opts.opponent;
      tc.h = train_opts.h;
      tc.steps = train_opts.steps;
      tc.omniscient = train_opts.omniscient;
      tc.feedback = train->count("--no-feedback") == 0;
      if (train->count("--vanilla-dqn")) tc.dqn_target = DqnTarget::VanillaMax;
      tc.validate();
      const fs::path out = train_opts.out;
      write_manifest(out, manifest_for("train", argc, argv, tc.seed, tc.to_json(),
                                       {"metrics.csv", "timing.csv", "checkpoint/"}));
      spdlog::info("training {} vs {} for {} episodes x {} rollouts of {} steps (h={}, feedback={})",
                   tc.scenario.name, tc.opponent, tc.episodes, tc.rollouts, tc.steps, tc.h, tc.feedback);
      cross_train(tc, out, [&](const EpisodeRecord& r) {
        spdlog::debug("episode {}.{} win={} blue={} red={} critic={:.4g} q={:.4g}", r.episode, r.rollout, r.stats.win,
                      r.stats.blue_alive, r.stats.red_alive, r.stats.critic_loss, r.stats.q_loss);
        if (r.rollout + 1 == tc.rollouts && (r.episode + 1) % 10 == 0) spdlog::info("episode {}/{}", r.episode + 1, tc.episodes);
      });
      spdlog::info("checkpoint written to {}", (out / "checkpoint").string());
    } else if (*eval || *sweep) {
      CommonOptions& o = *eval ? eval_opts : sweep_opts;
      EvalConfig& c = *eval ? ec : sc;
      c.scenario = resolve_scenario(o.scenario);
      c.seed = o.seed;
      c.opponent = o.opponent;
      c.steps = o.steps;
      c.omniscient = o.omniscient;
      if (c.instances < 1) throw ConfigError("--instances must be positive");
      const fs::path out = o.out;
      const std::string ckpt = *eval ? checkpoint : sweep_checkpoint;
      const PolicyBundle policy = load_policy(ckpt, c.scenario.slots);
      json cfg = {{"scenario", scenario_to_json(c.scenario)}, {"checkpoint", ckpt}, {"opponent", c.opponent},
                  {"instances", c.instances}, {"steps", c.steps}, {"loss_rate", c.uncertainty.loss_rate},
                  {"noise_sigma", c.uncertainty.noise_sigma}, {"omniscient", c.omniscient}};
      if (*eval) {
        if (write_replays) c.replay_dir = out / "replays";
        write_manifest(out, manifest_for("eval", argc, argv, c.seed, cfg, {"eval.csv"}));
        const EvalResult r = evaluate(policy, c);
        write_eval_metrics(out / "eval.csv", r);
        spdlog::info("win rate {:.3f} ({} wins, {} losses, {} timeouts), mean return {:.3f}, decision {:.3f} ms/step",
                     r.win_rate, r.wins, r.losses, r.timeouts, r.mean_return, 1e3 * r.mean_decision_seconds);
      } else {
        const auto ns = parse_sizes(sizes);
        cfg["sizes"] = ns;
        write_manifest(out, manifest_for("sweep", argc, argv, c.seed, cfg, {"sweep.csv"}));
        const auto rows = generalization_sweep(policy, c, ns);
        write_sweep_metrics(out / "sweep.csv", rows);
        for (const auto& row : rows)
          spdlog::info("V{}: win rate {:.3f}, decision {:.3f} ms/step", row.size, row.result.win_rate,
                       1e3 * row.result.mean_decision_seconds);
      }
    }
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const DivergenceError& e) {
    spdlog::error("{}", e.what());
    return kExitDivergence;
  }
  return 0;
}
