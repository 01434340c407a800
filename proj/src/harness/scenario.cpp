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

#include "swarmhrl/harness/scenario.hpp"

#include <algorithm>

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>

#include "swarmhrl/seeding.hpp"
#include "swarmhrl/sim/geometry.hpp"

namespace swarmhrl {

using nlohmann::json;

namespace {

constexpr int kAttemptsPerAgent = 20000;
constexpr int kAttemptsPerObstacle = 2000;
constexpr double kSpawnMargin = 0.05;

bool region_inside(const Region& r, const Arena& a) {
  return r.x0 <= r.x1 && r.y0 <= r.y1 && r.x0 >= 0.0 && r.y0 >= 0.0 && r.x1 <= a.width && r.y1 <= a.height;
}

Vec2 uniform_in(const Region& r, Rng& rng) {
  std::uniform_real_distribution<double> ux(r.x0, r.x1), uy(r.y0, r.y1);
  const double x = ux(rng);
  return {x, uy(rng)};
}

Vec2 mirror(Vec2 p, const Arena& a) { return {a.width - p.x, p.y}; }

std::vector<Rect> random_rectangles(const ScenarioSpec& spec, Rng& rng) {
  const Arena& arena = spec.engagement.arena;
  std::uniform_real_distribution<double> size(spec.obstacle_min_size, spec.obstacle_max_size);
  std::vector<Rect> out;
  auto place = [&](double x_lo, double x_hi) -> Rect {
    for (int attempt = 0; attempt < kAttemptsPerObstacle; ++attempt) {
      const double w = size(rng);
      const double h = size(rng);
      const double lo = std::max(x_lo, 1.0 + 0.5 * w), hi = std::min(x_hi, arena.width - 1.0 - 0.5 * w);
      const double ylo = 1.0 + 0.5 * h, yhi = arena.height - 1.0 - 0.5 * h;
      if (lo > hi || ylo > yhi) continue;
      std::uniform_real_distribution<double> ux(lo, hi), uy(ylo, yhi);
      const double x = ux(rng);
      return {{x, uy(rng)}, w, h};
    }
    throw ConfigError("scenario: obstacles do not fit in the arena");
  };
  if (!spec.symmetric) {
    for (int k = 0; k < spec.obstacle_count; ++k) out.push_back(place(0.0, arena.width));
    return out;
  }
  for (int k = 0; k < spec.obstacle_count / 2; ++k) {
    const Rect r = place(0.0, 0.5 * arena.width - 0.5);
    out.push_back(r);
    out.push_back({mirror(r.center, arena), r.width, r.height});
  }
  if (spec.obstacle_count % 2 == 1) {
    out.push_back(place(0.5 * arena.width, 0.5 * arena.width));
  }
  return out;
}

}  // namespace

void ScenarioSpec::validate() const {
  engagement.validate();
  slots.validate();
  const Arena& a = engagement.arena;
  if (blue < 1 || red < 1) throw ConfigError("scenario: team sizes must be >= 1");
  if (obstacle_count < 0) throw ConfigError("scenario: obstacle_count must be >= 0");
  if (!(obstacle_min_size > 0.0) || obstacle_max_size < obstacle_min_size)
    throw ConfigError("scenario: bad obstacle size range");
  if (!region_inside(blue_spawn, a) || !region_inside(red_spawn, a))
    throw ConfigError("scenario: spawn regions must lie inside the arena");
  if (!(min_team_separation >= 0.0)) throw ConfigError("scenario: min_team_separation must be >= 0");
  if (symmetric && blue != red) throw ConfigError("scenario: a symmetric layout needs equal team sizes");
  for (const auto& r : rectangles)
    if (!(r.width > 0.0 && r.height > 0.0) || !a.contains(r.center))
      throw ConfigError("scenario: obstacle rectangles need positive size and a center inside the arena");
}

ScenarioSpec ScenarioSpec::versus(int n) {
  ScenarioSpec s;
  s.name = "V" + std::to_string(n);
  s.blue = n;
  s.red = n;
  // Facing bands either side of the center line; the band grows with team size.
  const double half = 0.5 * std::min(18.0, 6.0 + 0.5 * std::max(0, n - 3));
  s.blue_spawn = {10.0, 10.0 - half, 14.0, 10.0 + half};
  s.red_spawn = {16.0, 10.0 - half, 20.0, 10.0 + half};
  return s;
}

WorldState generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(derive_seed(seed, streams::kLayout));
  const EngagementConfig& cfg = spec.engagement;
  const Arena& arena = cfg.arena;

  WorldState world;
  world.config = cfg;
  world.rng = Rng(derive_seed(seed, streams::kWorld));
  world.obstacles = ObstacleSet::from_rectangles(spec.rectangles.empty() ? random_rectangles(spec, rng) : spec.rectangles,
                                                 cfg.obstacle_radius);

  const double obstacle_gap = cfg.avoid_radius + cfg.obstacle_radius + kSpawnMargin;
  const double agent_gap = 2.0 * cfg.avoid_radius + kSpawnMargin;
  std::vector<Vec2> blue_pos, red_pos;
  auto clear_of_obstacles = [&](Vec2 p) {
    for (const auto& c : world.obstacles.circles)
      if (distance(p, c.center) < obstacle_gap) return false;
    return true;
  };
  auto clear_of = [&](Vec2 p, const std::vector<Vec2>& others, double gap) {
    for (const auto& o : others)
      if (distance(p, o) < gap) return false;
    return true;
  };
  auto accept = [&](Vec2 p, const std::vector<Vec2>& own, const std::vector<Vec2>& foes) {
    return clear_of_obstacles(p) && clear_of(p, own, agent_gap) && clear_of(p, foes, spec.min_team_separation) &&
           clear_of(p, foes, agent_gap);
  };

  if (spec.symmetric) {
    for (int k = 0; k < spec.blue; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < kAttemptsPerAgent && !placed; ++attempt) {
        const Vec2 p = uniform_in(spec.blue_spawn, rng);
        const Vec2 q = mirror(p, arena);
        std::vector<Vec2> foes = red_pos;
        foes.push_back(q);
        if (!accept(p, blue_pos, foes) || !accept(q, red_pos, blue_pos) || !clear_of(q, {p}, agent_gap)) continue;
        bool separated = true;
        for (const auto& b : blue_pos)
          if (distance(q, b) < spec.min_team_separation) separated = false;
        if (!separated) continue;
        blue_pos.push_back(p);
        red_pos.push_back(q);
        placed = true;
      }
      if (!placed) throw ConfigError("scenario '" + spec.name + "' is infeasible: could not place agents");
    }
  } else {
    auto fill = [&](int n, const Region& region, std::vector<Vec2>& own, const std::vector<Vec2>& foes) {
      for (int k = 0; k < n; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < kAttemptsPerAgent && !placed; ++attempt) {
          const Vec2 p = uniform_in(region, rng);
          if (!accept(p, own, foes)) continue;
          own.push_back(p);
          placed = true;
        }
        if (!placed) throw ConfigError("scenario '" + spec.name + "' is infeasible: could not place agents");
      }
    };
    fill(spec.blue, spec.blue_spawn, blue_pos, red_pos);
    fill(spec.red, spec.red_spawn, red_pos, blue_pos);
  }

  // Headings are uniform; a symmetric layout reflects them along with positions.
  std::uniform_real_distribution<double> heading(-std::numbers::pi, std::numbers::pi);
  std::vector<double> blue_heading, red_heading;
  for (std::size_t k = 0; k < blue_pos.size(); ++k) blue_heading.push_back(heading(rng));
  for (std::size_t k = 0; k < red_pos.size(); ++k)
    red_heading.push_back(spec.symmetric ? wrap_angle(std::numbers::pi - blue_heading[k]) : heading(rng));

  int id = 0;
  for (std::size_t k = 0; k < blue_pos.size(); ++k)
    world.agents.push_back({id++, Team::Blue, blue_pos[k], {}, blue_heading[k], TaskKind::Searching, true});
  for (std::size_t k = 0; k < red_pos.size(); ++k)
    world.agents.push_back({id++, Team::Red, red_pos[k], {}, red_heading[k], TaskKind::Searching, true});
  return world;
}

// ---------------------------------------------------------------------------

namespace {

json region_json(const Region& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

Region region_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw ConfigError("scenario: a region is [x0, y0, x1, y1]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json scenario_to_json(const ScenarioSpec& s) {
  json rects = json::array();
  for (const auto& r : s.rectangles) rects.push_back({{"center", {r.center.x, r.center.y}}, {"width", r.width}, {"height", r.height}});
  const auto& e = s.engagement;
  return {{"name", s.name},
          {"blue", s.blue},
          {"red", s.red},
          {"rectangles", rects},
          {"obstacle_count", s.obstacle_count},
          {"obstacle_min_size", s.obstacle_min_size},
          {"obstacle_max_size", s.obstacle_max_size},
          {"blue_spawn", region_json(s.blue_spawn)},
          {"red_spawn", region_json(s.red_spawn)},
          {"symmetric", s.symmetric},
          {"min_team_separation", s.min_team_separation},
          {"slots", {{"allies", s.slots.allies}, {"enemies", s.slots.enemies}, {"obstacles", s.slots.obstacles}}},
          {"engagement",
           {{"attack_radius", e.attack_radius},
            {"attack_angle", e.attack_angle},
            {"hit_prob", e.hit_prob},
            {"avoid_radius", e.avoid_radius},
            {"obstacle_radius", e.obstacle_radius},
            {"sense_length", e.sense_length},
            {"sense_width", e.sense_width},
            {"v_max", e.v_max},
            {"dt", e.dt},
            {"arena", {e.arena.width, e.arena.height}}}}};
}

ScenarioSpec scenario_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    ScenarioSpec s;
    if (j.contains("versus")) s = ScenarioSpec::versus(j.at("versus").get<int>());
    read_opt(j, "name", s.name);
    read_opt(j, "blue", s.blue);
    read_opt(j, "red", s.red);
    read_opt(j, "obstacle_count", s.obstacle_count);
    read_opt(j, "obstacle_min_size", s.obstacle_min_size);
    read_opt(j, "obstacle_max_size", s.obstacle_max_size);
    read_opt(j, "symmetric", s.symmetric);
    read_opt(j, "min_team_separation", s.min_team_separation);
    if (j.contains("blue_spawn")) s.blue_spawn = region_from(j.at("blue_spawn"));
    if (j.contains("red_spawn")) s.red_spawn = region_from(j.at("red_spawn"));
    if (j.contains("rectangles")) {
      for (const auto& r : j.at("rectangles"))
        s.rectangles.push_back({{r.at("center").at(0).get<double>(), r.at("center").at(1).get<double>()},
                                r.at("width").get<double>(), r.at("height").get<double>()});
    }
    if (j.contains("slots")) {
      const auto& sl = j.at("slots");
      read_opt(sl, "allies", s.slots.allies);
      read_opt(sl, "enemies", s.slots.enemies);
      read_opt(sl, "obstacles", s.slots.obstacles);
    }
    if (j.contains("engagement")) {
      const auto& e = j.at("engagement");
      auto& c = s.engagement;
      read_opt(e, "attack_radius", c.attack_radius);
      read_opt(e, "attack_angle", c.attack_angle);
      read_opt(e, "hit_prob", c.hit_prob);
      read_opt(e, "avoid_radius", c.avoid_radius);
      read_opt(e, "obstacle_radius", c.obstacle_radius);
      read_opt(e, "sense_length", c.sense_length);
      read_opt(e, "sense_width", c.sense_width);
      read_opt(e, "v_max", c.v_max);
      read_opt(e, "dt", c.dt);
      if (e.contains("arena")) {
        c.arena.width = e.at("arena").at(0).get<double>();
        c.arena.height = e.at("arena").at(1).get<double>();
      }
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open scenario file " + path.string());
  try {
    return scenario_from_json(json::parse(is));
  } catch (const json::exception& e) {
    throw ConfigError("scenario file " + path.string() + ": " + e.what());
  }
}

ScenarioSpec resolve_scenario(const std::string& s) {
  if (s.size() >= 2 && (s[0] == 'V' || s[0] == 'v')) {
    bool digits = true;
    for (std::size_t k = 1; k < s.size(); ++k) digits = digits && std::isdigit(static_cast<unsigned char>(s[k]));
    if (digits) {
      const int n = std::stoi(s.substr(1));
      if (n < 1) throw ConfigError("scenario: team size must be >= 1");
      return ScenarioSpec::versus(n);
    }
  }
  return load_scenario_file(s);
}

}  // namespace swarmhrl
