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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

/// Axis-aligned box [x0, x1] x [y0, y1].
struct Region {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool operator==(const Region&) const = default;
};

struct ScenarioSpec {
  std::string name = "V5";
  int blue = 5;
  int red = 5;
  /// Explicit obstacle rectangles; when empty, `obstacle_count` random ones.
  std::vector<Rect> rectangles;
  int obstacle_count = 6;
  double obstacle_min_size = 1.0;
  double obstacle_max_size = 2.5;
  Region blue_spawn{10.0, 7.0, 14.0, 13.0};
  Region red_spawn{16.0, 7.0, 20.0, 13.0};
  /// Mirror obstacles, red spawns and red headings of blue about x = W/2.
  bool symmetric = true;
  double min_team_separation = 5.0;
  EngagementConfig engagement;
  SlotConfig slots;

  /// Throws ConfigError.
  void validate() const;
  /// Default n-versus-n layout.
  static ScenarioSpec versus(int n);
};

/// Seeded placement of obstacles and agents. Agents are rejection-sampled so
/// that nobody starts in a collision and the two teams start at least
/// min_team_separation apart. Headings are uniform (mirrored for red in a
/// symmetric layout).
/// Throws ConfigError when the attempt budget runs out.
WorldState generate_scenario(const ScenarioSpec& spec, std::uint64_t seed);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
/// Missing keys keep their defaults; a "versus" key picks the n-vs-n preset
/// first. Throws ConfigError on malformed input.
ScenarioSpec scenario_from_json(const nlohmann::json& j);
ScenarioSpec load_scenario_file(const std::filesystem::path& path);

/// Resolves "V<n>" presets or a JSON file path.
ScenarioSpec resolve_scenario(const std::string& name_or_path);

}  // namespace swarmhrl
