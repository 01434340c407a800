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

#include "swarmhrl/policy/bundle.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "swarmhrl/lower/maddpg.hpp"
#include "swarmhrl/nn/checkpoint.hpp"
#include "swarmhrl/sim/observation.hpp"
#include "swarmhrl/upper/tasks.hpp"

namespace swarmhrl {

namespace fs = std::filesystem;
using nlohmann::json;

void PolicyBundle::validate() const {
  slots.validate();
  if (actors.empty() || qnets.empty()) throw ConfigError("policy: no networks");
  if (h < 1) throw ConfigError("policy: h must be positive");
  const auto actor_dim = static_cast<int>(actor_input_dim(slots));
  const auto upper_dim = static_cast<int>(UpperObservation::dim(slots));
  for (const auto& a : actors)
    if (a.input_dim() != actor_dim || (a.output_dim() != 2 && a.output_dim() != 3) ||
        a.head().kind != nn::HeadKind::Bounded)
      throw ConfigError("policy: actor shape does not match the observation slots");
  for (const auto& q : qnets)
    if (q.input_dim() != upper_dim || q.output_dim() != kUpperActionCount)
      throw ConfigError("policy: Q network shape does not match the observation slots");
}

void save_policy(const PolicyBundle& bundle, const fs::path& dir) {
  bundle.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create checkpoint directory " + dir.string());
  json meta = {{"format", "swarmhrl-policy"},
               {"version", kPolicyFormatVersion},
               {"h", bundle.h},
               {"slots", {{"allies", bundle.slots.allies}, {"enemies", bundle.slots.enemies},
                          {"obstacles", bundle.slots.obstacles}}},
               {"actors", bundle.actors.size()},
               {"qnets", bundle.qnets.size()}};
  for (std::size_t k = 0; k < bundle.actors.size(); ++k)
    nn::save_mlp_file(dir / ("actor_" + std::to_string(k) + ".mlp"), bundle.actors[k],
                      k < bundle.actor_adam.size() ? &bundle.actor_adam[k] : nullptr);
  for (std::size_t k = 0; k < bundle.qnets.size(); ++k)
    nn::save_mlp_file(dir / ("qnet_" + std::to_string(k) + ".mlp"), bundle.qnets[k],
                      k < bundle.qnet_adam.size() ? &bundle.qnet_adam[k] : nullptr);
  std::ofstream os(dir / "policy.json");
  if (!os) throw ConfigError("cannot write " + (dir / "policy.json").string());
  os << meta.dump(2) << "\n";
}

PolicyBundle load_policy(const fs::path& dir, const std::optional<SlotConfig>& expected_slots) {
  std::ifstream is(dir / "policy.json");
  if (!is) throw ConfigError("checkpoint not found: " + (dir / "policy.json").string());
  PolicyBundle b;
  try {
    const json meta = json::parse(is);
    if (meta.at("format").get<std::string>() != "swarmhrl-policy")
      throw ConfigError("not a policy checkpoint: " + dir.string());
    if (meta.at("version").get<int>() != kPolicyFormatVersion)
      throw ConfigError("unsupported policy checkpoint version");
    b.h = meta.at("h").get<int>();
    b.slots = {meta.at("slots").at("allies").get<int>(), meta.at("slots").at("enemies").get<int>(),
               meta.at("slots").at("obstacles").get<int>()};
    const auto n_actors = meta.at("actors").get<std::size_t>();
    const auto n_qnets = meta.at("qnets").get<std::size_t>();
    for (std::size_t k = 0; k < n_actors; ++k) {
      auto rec = nn::load_mlp_file(dir / ("actor_" + std::to_string(k) + ".mlp"));
      b.actors.push_back(std::move(rec.mlp));
      if (rec.adam) b.actor_adam.push_back(std::move(*rec.adam));
    }
    for (std::size_t k = 0; k < n_qnets; ++k) {
      auto rec = nn::load_mlp_file(dir / ("qnet_" + std::to_string(k) + ".mlp"));
      b.qnets.push_back(std::move(rec.mlp));
      if (rec.adam) b.qnet_adam.push_back(std::move(*rec.adam));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("malformed checkpoint " + dir.string() + ": " + e.what());
  }
  if (expected_slots && !(*expected_slots == b.slots))
    throw ConfigError("checkpoint slot capacities do not match the scenario");
  b.validate();
  return b;
}

}  // namespace swarmhrl
