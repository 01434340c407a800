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

#include "swarmhrl/train/episode.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "swarmhrl/harness/replay.hpp"
#include "swarmhrl/lower/rewards.hpp"
#include "swarmhrl/sim/world.hpp"

namespace swarmhrl {

Learner::Learner(int n_blue, int n_red, const SlotConfig& slots, int h, LearnerConfig config, Rng& init_rng)
    : config_(config), slots_(slots), h_(h),
      lower_(n_blue, n_red, static_cast<int>(actor_input_dim(slots)), 2.0, config.lower, init_rng),
      lower_buffer_(config.lower.capacity) {
  for (int k = 0; k < n_blue; ++k) {
    upper_.emplace_back(static_cast<int>(UpperObservation::dim(slots)), config.upper, init_rng);
    upper_buffers_.emplace_back(config.upper.capacity);
  }
}

void Learner::track(bool non_finite) {
  non_finite_streak_ = non_finite ? non_finite_streak_ + 1 : 0;
  if (non_finite_streak_ >= config_.divergence_patience)
    throw DivergenceError("training diverged: " + std::to_string(non_finite_streak_) +
                          " consecutive updates with non-finite losses");
}

LowerUpdateStats Learner::update_lower(Rng& rng) {
  LowerUpdateStats mean;
  for (int g = 0; g < config_.gradient_steps; ++g) {
    const LowerUpdateStats s = lower_.update(lower_buffer_, rng);
    if (!s.performed) return mean;
    track(s.skipped > 0);
    mean.performed = true;
    mean.skipped += s.skipped;
    mean.critic_loss += s.critic_loss / config_.gradient_steps;
    mean.actor_loss += s.actor_loss / config_.gradient_steps;
  }
  return mean;
}

std::optional<double> Learner::update_upper(Rng& rng) {
  double total = 0.0;
  int n = 0;
  bool non_finite = false;
  for (int g = 0; g < config_.gradient_steps; ++g) {
    for (std::size_t k = 0; k < upper_.size(); ++k) {
      const UpperUpdateStats s = upper_[k].update(upper_buffers_[k], rng);
      if (!s.performed) continue;
      non_finite = non_finite || s.skipped;
      total += s.loss;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  track(non_finite);
  return total / n;
}

void Learner::attach(HrlController& controller) const {
  std::vector<const nn::Mlp*> actors, qnets;
  for (const auto& a : lower_.actors()) actors.push_back(&a);
  for (const auto& q : upper_) qnets.push_back(&q.online());
  controller.set_networks(std::move(actors), std::move(qnets));
}

PolicyBundle Learner::snapshot() const {
  PolicyBundle b;
  b.actors = lower_.actors();
  b.actor_adam = lower_.actor_optimizers();
  for (const auto& q : upper_) {
    b.qnets.push_back(q.online());
    b.qnet_adam.push_back(q.optimizer());
  }
  b.slots = slots_;
  b.h = h_;
  return b;
}

// ---------------------------------------------------------------------------

namespace {

bool in_bounds(const LowerAction& a, double v_max) {
  return a.speed >= 0.0 && a.speed <= v_max && a.heading >= -std::numbers::pi && a.heading <= std::numbers::pi;
}

std::vector<double> concat(const std::vector<std::vector<double>>& parts, std::size_t width) {
  std::vector<double> out;
  out.reserve(parts.size() * width);
  for (const auto& p : parts) {
    if (p.empty())
      out.insert(out.end(), width, 0.0);
    else
      out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<double> joint_state(const WorldState& world, const HrlController& c) {
  std::vector<Vec2> q, start;
  for (int k = 0; k < c.team_size(); ++k) {
    q.push_back(c.subgoal(k));
    start.push_back(c.subtask_start(k));
  }
  return encode_joint_state(world, Team::Blue, q, start);
}

std::vector<std::uint8_t> alive_flags(const WorldState& world, const std::vector<int>& ids) {
  std::vector<std::uint8_t> f;
  for (int id : ids) f.push_back(world.agents[static_cast<std::size_t>(id)].alive ? 1 : 0);
  return f;
}

struct PendingUpper {
  bool active = false;
  UpperTransition t;
};

}  // namespace

EpisodeStats run_episode(WorldState world, HrlController& blue, TeamPolicy& red, const EpisodeSettings& settings,
                         Rng& blue_rng, Rng& red_rng, Learner* learner, Rng* learn_rng, ReplayWriter* replay) {
  using Clock = std::chrono::steady_clock;
  if (learner && !learn_rng) throw std::invalid_argument("run_episode: learner needs an rng");
  if (settings.steps < 1) throw std::invalid_argument("run_episode: steps must be positive");
  blue.reset(world);
  red.reset(world, Team::Red);
  if (learner) learner->attach(blue);

  const auto& ids = blue.ids();
  const int n = blue.team_size();
  const std::size_t actor_dim = actor_input_dim(blue.config().slots);
  const std::size_t upper_dim = UpperObservation::dim(blue.config().slots);
  const double v_max = world.config.v_max;

  EpisodeStats stats;
  stats.upper_actions.assign(kUpperActionCount, 0);
  SubtaskTally tally;
  std::optional<LowerTransition> pending_lower;
  std::vector<PendingUpper> pending_upper(static_cast<std::size_t>(n));
  std::vector<LowerAction> actions(world.agents.size());
  double critic_sum = 0.0, actor_sum = 0.0, q_sum = 0.0;

  auto close_subtask = [&](const std::vector<std::vector<double>>& next_obs, const std::vector<ActionMask>& masks,
                           bool terminal) {
    tally.survivors = world.count_alive(Team::Blue);
    const double r_env = upper_reward(tally, false);
    stats.env_return += r_env;
    const double reward = upper_reward(tally, settings.feedback);
    if (learner) {
      for (int k = 0; k < n; ++k) {
        auto& p = pending_upper[static_cast<std::size_t>(k)];
        if (!p.active) continue;
        const bool alive = world.agents[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])].alive;
        p.t.reward = reward;
        p.t.next_obs = next_obs[static_cast<std::size_t>(k)];
        if (p.t.next_obs.empty()) p.t.next_obs.assign(upper_dim, 0.0);
        p.t.next_mask = masks[static_cast<std::size_t>(k)];
        p.t.done = terminal || !alive;
        learner->push_upper(k, std::move(p.t));
        p = {};
      }
    }
    tally = {};
  };

  auto finish_lower = [&](const std::vector<std::vector<double>>& next_inputs, bool done) {
    if (!pending_lower) return;
    pending_lower->next_obs = concat(next_inputs, actor_dim);
    pending_lower->next_state = joint_state(world, blue);
    pending_lower->next_alive = alive_flags(world, ids);
    pending_lower->done = done;
    learner->push_lower(std::move(*pending_lower));
    pending_lower.reset();
  };

  auto upper_update = [&] {
    ++stats.upper_updates;
    if (!settings.update_upper) return;
    if (const auto loss = learner->update_upper(*learn_rng)) {
      q_sum += *loss;
      ++stats.upper_performed;
    }
  };

  if (replay) replay->write(world);
  bool terminal = false;
  for (int t = 0; t < settings.steps && !terminal; ++t) {
    const auto t0 = Clock::now();
    ControllerStep cs = blue.step(world, settings.epsilon, settings.action_noise, blue_rng);
    stats.decision_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    ++stats.decision_steps;

    for (const auto& d : cs.decisions) ++stats.upper_actions[static_cast<std::size_t>(d.action)];

    if (cs.boundary && t > 0) {
      std::vector<std::vector<double>> next(static_cast<std::size_t>(n));
      std::vector<ActionMask> masks(static_cast<std::size_t>(n), ActionMask{false, false, true});
      for (const auto& d : cs.decisions) {
        next[static_cast<std::size_t>(d.local)] = d.obs;
        masks[static_cast<std::size_t>(d.local)] = d.mask;
      }
      close_subtask(next, masks, false);
      if (learner) upper_update();
    }
    if (learner && cs.boundary) {
      for (const auto& d : cs.decisions) {
        auto& p = pending_upper[static_cast<std::size_t>(d.local)];
        p.active = true;
        p.t.obs = d.obs;
        p.t.action = static_cast<int>(d.action);
        p.t.subgoal = d.resolved.subgoal;
      }
    }

    if (learner) {
      finish_lower(cs.actor_inputs, false);
      ++stats.lower_updates;
      const LowerUpdateStats ls = learner->update_lower(*learn_rng);
      if (ls.performed) {
        critic_sum += ls.critic_loss;
        actor_sum += ls.actor_loss;
        ++stats.lower_performed;
      }
    }

    std::fill(actions.begin(), actions.end(), LowerAction{});
    for (const auto& c : cs.commands) stats.actions_in_bounds = stats.actions_in_bounds && in_bounds(c.action, v_max);
    write_actions(cs.commands, actions);
    const auto red_commands = red.act(world, red_rng);
    for (const auto& c : red_commands) stats.actions_in_bounds = stats.actions_in_bounds && in_bounds(c.action, v_max);
    write_actions(red_commands, actions);

    LowerTransition lt;
    if (learner) {
      lt.state = joint_state(world, blue);
      lt.obs = concat(cs.actor_inputs, actor_dim);
      lt.alive = alive_flags(world, ids);
      lt.actions.assign(static_cast<std::size_t>(2 * n), 0.0);
      for (int k = 0; k < n; ++k) {
        if (!lt.alive[static_cast<std::size_t>(k)]) continue;
        const auto& a = actions[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])];
        lt.actions[static_cast<std::size_t>(2 * k)] = a.speed;
        lt.actions[static_cast<std::size_t>(2 * k + 1)] = a.heading;
      }
    }

    const StepEvents ev = step_world(world, actions);
    ++stats.steps;
    if (replay) replay->write(world);
    stats.blue_kills += ev.kills_by(Team::Blue, world);
    stats.red_kills += ev.kills_by(Team::Red, world);
    tally.kills += ev.kills_by(Team::Blue, world);

    std::vector<double> r_a(static_cast<std::size_t>(n)), r_b(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const int id = ids[static_cast<std::size_t>(k)];
      const AgentState& a = world.agents[static_cast<std::size_t>(id)];
      if (!a.alive) {
        r_a[static_cast<std::size_t>(k)] = 0.0;
        r_b[static_cast<std::size_t>(k)] = -1.0;
        continue;
      }
      r_a[static_cast<std::size_t>(k)] =
          avoidance_reward(ev.collisions[static_cast<std::size_t>(id)] || ev.boundary[static_cast<std::size_t>(id)]);
      r_b[static_cast<std::size_t>(k)] = intrinsic_reward(a.position, blue.subtask_start(k), blue.subgoal(k));
    }
    const double r_l = lower_reward(r_a, r_b, settings.eps1);
    stats.lower_return += r_l;
    tally.lower_sum += r_l;
    terminal = ev.terminal;
    if (ev.winner) stats.winner = ev.winner;
    if (learner) {
      lt.reward = r_l;
      lt.agent_rewards.resize(static_cast<std::size_t>(n));
      for (std::size_t k = 0; k < lt.agent_rewards.size(); ++k)
        lt.agent_rewards[k] = settings.eps1 * r_a[k] + (1.0 - settings.eps1) * r_b[k];
      pending_lower = std::move(lt);
    }
  }

  // Close the last subtask: a terminal one, a full one ending exactly at the
  // step budget (which gets its scheduled update), or a trailing partial one.
  const bool full_boundary = !terminal && stats.steps % blue.config().h == 0;
  std::vector<ActionMask> masks;
  const auto next_upper = blue.peek_upper_inputs(world, blue_rng, &masks);
  if (learner) finish_lower(blue.peek_actor_inputs(world, blue_rng), terminal);
  close_subtask(next_upper, masks, terminal);
  if (learner && full_boundary) upper_update();

  stats.blue_alive = world.count_alive(Team::Blue);
  stats.red_alive = world.count_alive(Team::Red);
  stats.win = stats.winner == Team::Blue;
  if (stats.lower_performed) {
    stats.critic_loss = critic_sum / stats.lower_performed;
    stats.actor_loss = actor_sum / stats.lower_performed;
  }
  if (stats.upper_performed) stats.q_loss = q_sum / stats.upper_performed;
  return stats;
}

}  // namespace swarmhrl
