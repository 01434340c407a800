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

#include "swarmhrl/policy/hrl_controller.hpp"

#include <numbers>
#include <stdexcept>

#include "swarmhrl/lower/maddpg.hpp"

namespace swarmhrl {

namespace {

Vec2 mirror_point(Vec2 p, const Arena& arena) { return {arena.width - p.x, p.y}; }

double mirror_heading(double psi) { return wrap_angle(std::numbers::pi - psi); }

}  // namespace

WorldState reflect_world(const WorldState& world) {
  WorldState m = world;
  const Arena& arena = world.config.arena;
  for (auto& a : m.agents) {
    a.position = mirror_point(a.position, arena);
    a.velocity.x = -a.velocity.x;
    a.heading = mirror_heading(a.heading);
  }
  for (auto& r : m.obstacles.rectangles) r.center = mirror_point(r.center, arena);
  for (auto& c : m.obstacles.circles) c.center = mirror_point(c.center, arena);
  return m;
}

HrlController::HrlController(ControllerConfig config, Team team)
    : config_(config), team_(team), planner_(config.predictor, config.omniscient) {
  if (config.h < 1) throw ConfigError("controller: h must be positive");
  config.slots.validate();
}

void HrlController::set_networks(std::vector<const nn::Mlp*> actors, std::vector<const nn::Mlp*> qnets) {
  if (actors.empty() || qnets.empty()) throw std::invalid_argument("HrlController: no networks");
  const auto actor_dim = static_cast<int>(actor_input_dim(config_.slots));
  const auto upper_dim = static_cast<int>(UpperObservation::dim(config_.slots));
  for (const auto* a : actors)
    if (a->input_dim() != actor_dim) throw ConfigError("controller: actor input size does not match the slots");
  for (const auto* q : qnets)
    if (q->input_dim() != upper_dim) throw ConfigError("controller: Q network input size does not match the slots");
  actors_ = std::move(actors);
  qnets_ = std::move(qnets);
}

void HrlController::reset(const WorldState& world) {
  ids_ = world.team_ids(team_);
  arena_ = world.config.arena;
  planner_.reset();
  subgoals_.clear();
  starts_.clear();
  for (int id : ids_) {
    const Vec2 p = world.agents[static_cast<std::size_t>(id)].position;
    subgoals_.push_back(config_.reflect ? mirror_point(p, world.config.arena) : p);
    starts_.push_back(p);
  }
  start_step_ = world.step_index;
}

bool HrlController::is_boundary(const WorldState& world) const {
  return (world.step_index - start_step_) % config_.h == 0;
}

const nn::Mlp& HrlController::actor_for(int local) const {
  return *actors_[static_cast<std::size_t>(local) % actors_.size()];
}

const nn::Mlp& HrlController::qnet_for(int local) const {
  return *qnets_[static_cast<std::size_t>(local) % qnets_.size()];
}

Vec2 HrlController::subgoal(int local) const {
  const Vec2 q = subgoals_[static_cast<std::size_t>(local)];
  return config_.reflect ? mirror_point(q, arena_) : q;
}

std::vector<double> HrlController::actor_input_for(const WorldState& view, int local, Rng& rng) const {
  const int id = ids_[static_cast<std::size_t>(local)];
  LowerObservation obs = build_lower_observation(view, id, config_.slots);
  obs = apply_uncertainty(std::move(obs), config_.uncertainty, rng);
  return actor_input(obs, subgoals_[static_cast<std::size_t>(local)], view.config);
}

ControllerStep HrlController::step(WorldState& world, double epsilon, double action_noise, Rng& rng) {
  if (actors_.empty()) throw std::logic_error("HrlController: networks not set");
  WorldState mirrored;
  if (config_.reflect) mirrored = reflect_world(world);
  const WorldState& view = config_.reflect ? mirrored : world;
  const auto& cfg = world.config;

  planner_.observe(view, team_);
  ControllerStep out;
  out.boundary = is_boundary(world);
  if (out.boundary) {
    for (int k = 0; k < team_size(); ++k) {
      const int id = ids_[static_cast<std::size_t>(k)];
      if (!world.agents[static_cast<std::size_t>(id)].alive) continue;
      UpperObservation uo = apply_uncertainty(build_upper_observation(view, id, config_.slots),
                                              config_.uncertainty, rng);
      UpperDecision d;
      d.id = id;
      d.local = k;
      d.obs = uo.flatten(cfg);
      d.mask = feasible_actions(uo);
      d.action = select_task(qnet_for(k), d.obs, d.mask, epsilon, rng);
      d.resolved = resolve_subgoal(d.action, uo, view, planner_, rng);
      subgoals_[static_cast<std::size_t>(k)] = d.resolved.subgoal;
      starts_[static_cast<std::size_t>(k)] = world.agents[static_cast<std::size_t>(id)].position;
      out.decisions.push_back(std::move(d));
    }
    // Flags change only after every agent has decided.
    for (const auto& d : out.decisions) world.agents[static_cast<std::size_t>(d.id)].task = d.resolved.task;
  }

  out.actor_inputs.resize(ids_.size());
  for (int k = 0; k < team_size(); ++k) {
    const int id = ids_[static_cast<std::size_t>(k)];
    const AgentState& agent = world.agents[static_cast<std::size_t>(id)];
    if (!agent.alive) continue;
    auto& x = out.actor_inputs[static_cast<std::size_t>(k)];
    x = actor_input_for(view, k, rng);
    LowerAction a = select_action(actor_for(k), x, action_noise, rng);
    if (config_.reflect) a.heading = mirror_heading(a.heading);
    out.commands.push_back({id, agent.task, subgoal(k), a});
  }
  return out;
}

std::vector<std::vector<double>> HrlController::peek_actor_inputs(const WorldState& world, Rng& rng) const {
  WorldState mirrored;
  if (config_.reflect) mirrored = reflect_world(world);
  const WorldState& view = config_.reflect ? mirrored : world;
  std::vector<std::vector<double>> out(ids_.size());
  for (int k = 0; k < team_size(); ++k) {
    if (world.agents[static_cast<std::size_t>(ids_[static_cast<std::size_t>(k)])].alive)
      out[static_cast<std::size_t>(k)] = actor_input_for(view, k, rng);
    else
      out[static_cast<std::size_t>(k)].assign(actor_input_dim(config_.slots), 0.0);
  }
  return out;
}

std::vector<std::vector<double>> HrlController::peek_upper_inputs(const WorldState& world, Rng& rng,
                                                                  std::vector<ActionMask>* masks) const {
  WorldState mirrored;
  if (config_.reflect) mirrored = reflect_world(world);
  const WorldState& view = config_.reflect ? mirrored : world;
  std::vector<std::vector<double>> out(ids_.size());
  if (masks) masks->assign(ids_.size(), ActionMask{false, false, true});
  for (int k = 0; k < team_size(); ++k) {
    const int id = ids_[static_cast<std::size_t>(k)];
    if (!world.agents[static_cast<std::size_t>(id)].alive) {
      out[static_cast<std::size_t>(k)].assign(UpperObservation::dim(config_.slots), 0.0);
      continue;
    }
    const UpperObservation uo = apply_uncertainty(build_upper_observation(view, id, config_.slots),
                                                  config_.uncertainty, rng);
    out[static_cast<std::size_t>(k)] = uo.flatten(world.config);
    if (masks) (*masks)[static_cast<std::size_t>(k)] = feasible_actions(uo);
  }
  return out;
}

// ---------------------------------------------------------------------------

HrlTeamPolicy::HrlTeamPolicy(PolicyBundle bundle, ControllerConfig config, const char* label)
    : bundle_(std::move(bundle)), config_(config), controller_(config, Team::Blue), label_(label) {
  bundle_.validate();
  if (!(bundle_.slots == config.slots)) throw ConfigError("policy slot capacities do not match the scenario");
  bind();
}

void HrlTeamPolicy::bind() {
  std::vector<const nn::Mlp*> actors, qnets;
  for (const auto& a : bundle_.actors) actors.push_back(&a);
  for (const auto& q : bundle_.qnets) qnets.push_back(&q);
  controller_.set_networks(std::move(actors), std::move(qnets));
}

void HrlTeamPolicy::reset(const WorldState& world, Team team) {
  if (team != controller_.team()) {
    controller_ = HrlController(config_, team);
    bind();
  }
  controller_.reset(world);
}

std::vector<AgentCommand> HrlTeamPolicy::act(WorldState& world, Rng& rng) {
  return controller_.step(world, 0.0, 0.0, rng).commands;
}

}  // namespace swarmhrl
