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

#include "swarmhrl/harness/replay.hpp"

#include <string>

#include <json.hpp>

namespace swarmhrl {

using nlohmann::json;

ReplayWriter::ReplayWriter(const std::filesystem::path& path) : os_(path) {
  if (!os_) throw ConfigError("cannot write replay file " + path.string());
  os_.precision(17);
}

void ReplayWriter::write(const WorldState& world) {
  json agents = json::array();
  for (const auto& a : world.agents)
    agents.push_back({{"id", a.id},
                      {"team", a.team == Team::Blue ? "blue" : "red"},
                      {"x", a.position.x},
                      {"y", a.position.y},
                      {"vx", a.velocity.x},
                      {"vy", a.velocity.y},
                      {"heading", a.heading},
                      {"task", task_code(a.task)},
                      {"alive", a.alive}});
  os_ << json{{"step", world.step_index}, {"agents", agents}}.dump() << '\n';
  ++lines_;
}

int ReplayFrame::alive(Team team) const {
  int n = 0;
  for (const auto& a : agents) n += (a.alive && a.team == team) ? 1 : 0;
  return n;
}

std::vector<ReplayFrame> load_replay(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open replay file " + path.string());
  std::vector<ReplayFrame> frames;
  std::string line;
  try {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      ReplayFrame f;
      f.step = j.at("step").get<std::int64_t>();
      for (const auto& a : j.at("agents")) {
        AgentState s;
        s.id = a.at("id").get<int>();
        s.team = a.at("team").get<std::string>() == "blue" ? Team::Blue : Team::Red;
        s.position = {a.at("x").get<double>(), a.at("y").get<double>()};
        s.velocity = {a.at("vx").get<double>(), a.at("vy").get<double>()};
        s.heading = a.at("heading").get<double>();
        s.task = task_from_code(a.at("task").get<int>());
        s.alive = a.at("alive").get<bool>();
        f.agents.push_back(s);
      }
      frames.push_back(std::move(f));
    }
  } catch (const std::exception& e) {
    throw ConfigError("malformed replay " + path.string() + ": " + e.what());
  }
  return frames;
}

}  // namespace swarmhrl
