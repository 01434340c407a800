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

#include "swarmhrl/train/metrics.hpp"

#include <fstream>

#include <fmt/format.h>

namespace swarmhrl {

namespace {

const char* winner_name(const std::optional<Team>& w) { return w ? team_name(*w) : "none"; }

}  // namespace

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

void write_training_header(std::ostream& os) {
  os << "schema_version,episode,rollout,instance,steps,win,winner,blue_alive,red_alive,blue_kills,red_kills,"
        "env_return,lower_return,epsilon,action_noise,lower_updates,upper_updates,critic_loss,actor_loss,q_loss,"
        "chase,support,search_or_escape\n";
}

void write_training_row(std::ostream& os, const EpisodeRecord& r) {
  const EpisodeStats& s = r.stats;
  os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g},{:.17g},{:.17g},{},{},{}\n",
                    kMetricsSchemaVersion, r.episode, r.rollout, r.instance, s.steps, s.win ? 1 : 0, winner_name(s.winner),
                    s.blue_alive, s.red_alive, s.blue_kills, s.red_kills, s.env_return, s.lower_return, r.epsilon,
                    r.noise, s.lower_updates, s.upper_updates, s.critic_loss, s.actor_loss, s.q_loss,
                    s.upper_actions[0], s.upper_actions[1], s.upper_actions[2]);
}

void write_training_metrics(const std::filesystem::path& path, const std::vector<EpisodeRecord>& records) {
  auto os = open_output(path);
  write_training_header(os);
  for (const auto& r : records) write_training_row(os, r);
}

void write_timing_header(std::ostream& os) {
  os << "schema_version,episode,rollout,decision_steps,decision_seconds,mean_decision_seconds\n";
}

void write_timing_row(std::ostream& os, const EpisodeRecord& r) {
  const auto& s = r.stats;
  os << fmt::format("{},{},{},{},{:.9g},{:.9g}\n", kMetricsSchemaVersion, r.episode, r.rollout, s.decision_steps,
                    s.decision_seconds, s.decision_steps ? s.decision_seconds / s.decision_steps : 0.0);
}

void write_eval_metrics(const std::filesystem::path& path, const EvalResult& result) {
  auto os = open_output(path);
  os << "schema_version,instance,steps,winner,blue_alive,red_alive,blue_kills,red_kills,env_return,"
        "mean_decision_seconds\n";
  for (const auto& e : result.episodes)
    os << fmt::format("{},{},{},{},{},{},{},{},{:.17g},{:.9g}\n", kMetricsSchemaVersion, e.instance, e.steps,
                      winner_name(e.winner), e.blue_alive, e.red_alive, e.blue_kills, e.red_kills, e.env_return,
                      e.decision_steps ? e.decision_seconds / e.decision_steps : 0.0);
}

void write_sweep_metrics(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto os = open_output(path);
  os << "schema_version,size,episodes,wins,losses,timeouts,win_rate,mean_return,mean_decision_seconds,"
        "actions_in_bounds\n";
  for (const auto& r : rows) {
    const auto& e = r.result;
    os << fmt::format("{},{},{},{},{},{},{:.6f},{:.6f},{:.9g},{}\n", kMetricsSchemaVersion, r.size,
                      e.episodes.size(), e.wins, e.losses, e.timeouts, e.win_rate, e.mean_return,
                      e.mean_decision_seconds, e.actions_in_bounds ? 1 : 0);
  }
}

}  // namespace swarmhrl
