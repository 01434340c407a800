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

#include "swarmhrl/predict/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace swarmhrl::predict {

void PredictorConfig::validate() const {
  if (horizon < 1) throw ConfigError("predictor horizon must be >= 1");
  if (rollouts < 1) throw ConfigError("predictor rollouts must be >= 1");
  if (!(link_threshold > 0.0)) throw ConfigError("link_threshold must be positive");
  if (!(escape_distance > 0.0)) throw ConfigError("escape_distance must be positive");
  if (candidates < 1) throw ConfigError("candidate count must be >= 1");
  if (!(heading_jitter >= 0.0)) throw ConfigError("heading_jitter must be >= 0");
}

Vec2 second_order_step(Vec2 p, Vec2 v_now, Vec2 v_prev, double dt) {
  const Vec2 accel = (v_now - v_prev) / dt;
  return p + v_now * dt + accel * (0.5 * dt * dt);
}

Vec2 potential_field_correct(Vec2 p, const ObstacleSet& obstacles, double clearance, double dt) {
  Vec2 push;
  for (const auto& c : obstacles.circles) {
    const Vec2 d = p - c.center;
    const double dist = d.norm();
    if (dist >= clearance) continue;
    const Vec2 dir = dist > 0.0 ? d / dist : Vec2{1.0, 0.0};
    push += dir * (dt * (clearance - dist));
  }
  return p + push;
}

void TrackHistory::append(std::int64_t step, Vec2 p) {
  if (!steps.empty() && step <= steps.back()) {
    if (step == steps.back()) positions.back() = p;
    return;
  }
  steps.push_back(step);
  positions.push_back(p);
}

namespace {

Vec2 cap_speed(Vec2 v, double v_max) {
  const double n = v.norm();
  return n > v_max ? v * (v_max / n) : v;
}

// Velocity implied by samples k-1 and k, scaled by their step gap.
Vec2 sample_velocity(const TrackHistory& h, std::size_t k, double dt) {
  const double gap = static_cast<double>(h.steps[k] - h.steps[k - 1]) * dt;
  return (h.positions[k] - h.positions[k - 1]) / gap;
}

}  // namespace

std::vector<PredictedTrajectory> rollout(const TrackHistory& history, const PredictorConfig& cfg,
                                         const EngagementConfig& engagement, const ObstacleSet& obstacles,
                                         Rng& rng) {
  std::vector<PredictedTrajectory> out;
  if (history.empty()) return out;
  const double dt = engagement.dt;
  const double clearance = engagement.avoid_radius + engagement.obstacle_radius;
  const std::size_t n = history.positions.size();

  Vec2 v_now, v_prev;
  if (n >= 2) v_now = cap_speed(sample_velocity(history, n - 1, dt), engagement.v_max);
  v_prev = n >= 3 ? cap_speed(sample_velocity(history, n - 2, dt), engagement.v_max) : v_now;

  std::normal_distribution<double> jitter(0.0, cfg.heading_jitter);
  out.reserve(static_cast<std::size_t>(cfg.rollouts));
  for (int m = 0; m < cfg.rollouts; ++m) {
    PredictedTrajectory traj{history.enemy_id, m, {}};
    traj.positions.reserve(static_cast<std::size_t>(cfg.horizon));
    Vec2 p = history.positions.back();
    Vec2 vn = v_now, vp = v_prev;
    for (int k = 0; k < cfg.horizon; ++k) {
      if (cfg.heading_jitter > 0.0) {
        const double a = jitter(rng);
        vn = vn.rotated(a);
        vp = vp.rotated(a);
      }
      Vec2 next = second_order_step(p, vn, vp, dt);
      next = potential_field_correct(next, obstacles, clearance, dt);
      next = engagement.arena.clamp(next);
      vp = vn;
      vn = cap_speed((next - p) / dt, engagement.v_max);
      p = next;
      traj.positions.push_back(p);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

ClusterSet cluster(std::span<const Vec2> points, double link_threshold) {
  const std::size_t n = points.size();
  ClusterSet result;
  if (n == 0) return result;

  // Condensed symmetric distance matrix, i < j.
  auto idx = [n](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  };
  std::vector<double> dist(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[idx(i, j)] = distance(points[i], points[j]);

  std::vector<double> weight(n, 1.0);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);
  std::vector<std::size_t> where(n);
  std::iota(where.begin(), where.end(), 0);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  auto deactivate = [&](std::size_t slot) {
    const std::size_t pos = where[slot];
    const std::size_t last = active.back();
    active[pos] = last;
    where[last] = pos;
    active.pop_back();
  };

  std::vector<std::size_t> chain;
  while (active.size() > 1) {
    if (chain.empty()) chain.push_back(*std::min_element(active.begin(), active.end()));
    std::size_t a = 0, b = 0;
    double height = 0.0;
    while (true) {
      a = chain.back();
      const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
      double best = prev < n ? dist[idx(a, prev)] : std::numeric_limits<double>::infinity();
      std::size_t best_k = prev;
      for (std::size_t k : active) {
        if (k == a) continue;
        const double d = dist[idx(a, k)];
        if (d < best || (d == best && best_k != prev && k < best_k)) {
          best = d;
          best_k = k;
        }
      }
      if (best_k == prev) {
        b = prev;
        height = best;
        chain.pop_back();
        chain.pop_back();
        break;
      }
      chain.push_back(best_k);
    }

    // Merge b into a (keep the lower slot as representative).
    if (b < a) std::swap(a, b);
    const double wa = weight[a], wb = weight[b];
    for (std::size_t k : active) {
      if (k == a || k == b) continue;
      dist[idx(a, k)] = (wa * dist[idx(a, k)] + wb * dist[idx(b, k)]) / (wa + wb);
    }
    weight[a] = wa + wb;
    deactivate(b);
    // The dendrogram of average linkage is monotone, so applying only the
    // merges below the threshold reproduces the thresholded greedy partition.
    if (height < link_threshold) parent[find(b)] = find(a);
    // Slots on the chain that saw a or b keep valid distances; b is gone.
    chain.erase(std::remove(chain.begin(), chain.end(), b), chain.end());
  }

  // Canonical numbering by lowest member index.
  result.labels.assign(n, -1);
  std::vector<int> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (root_label[r] < 0) {
      root_label[r] = static_cast<int>(result.centers.size());
      result.centers.emplace_back();
      result.sizes.push_back(0);
    }
    const int label = root_label[r];
    result.labels[i] = label;
    result.centers[static_cast<std::size_t>(label)] += points[i];
    ++result.sizes[static_cast<std::size_t>(label)];
  }
  for (std::size_t c = 0; c < result.centers.size(); ++c)
    result.centers[c] = result.centers[c] / static_cast<double>(result.sizes[c]);
  return result;
}

Vec2 search_subgoal(const ClusterSet& clusters, Vec2 p, const Arena& arena) {
  if (clusters.centers.empty()) return arena.center();
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < clusters.centers.size(); ++c) {
    const double d = (clusters.centers[c] - p).squared_norm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return clusters.centers[best];
}

EscapeCandidates escape_candidates(const ClusterSet& clusters, const EngagementConfig& engagement,
                                   const ObstacleSet& obstacles, double escape_distance, int count, Rng& rng) {
  if (!(escape_distance > 0.0)) throw std::invalid_argument("escape_candidates: d4 must be positive");
  const Arena& arena = engagement.arena;
  const double clearance = engagement.avoid_radius + engagement.obstacle_radius;
  std::uniform_real_distribution<double> ux(0.0, arena.width), uy(0.0, arena.height);

  EscapeCandidates out;
  out.effective_distance = escape_distance;
  constexpr int kMaxRejections = 10000;
  int rejections = 0;
  while (static_cast<int>(out.points.size()) < count) {
    const Vec2 c{ux(rng), uy(rng)};
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& center : clusters.centers) nearest = std::min(nearest, distance(c, center));
    bool ok = nearest > out.effective_distance;
    for (std::size_t k = 0; ok && k < obstacles.circles.size(); ++k)
      ok = distance(c, obstacles.circles[k].center) >= clearance;
    if (ok) {
      out.points.push_back({c, nearest});
      rejections = 0;
    } else if (++rejections >= kMaxRejections) {
      out.effective_distance *= 0.8;
      ++out.relaxations;
      rejections = 0;
    }
  }
  return out;
}

Vec2 escape_subgoal(std::span<const CandidatePoint> candidates, Vec2 p) {
  if (candidates.empty()) throw std::invalid_argument("escape_subgoal: no candidates");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double d = (candidates[k].position - p).squared_norm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return candidates[best].position;
}

}  // namespace swarmhrl::predict
