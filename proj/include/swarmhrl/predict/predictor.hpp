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
#include <optional>
#include <span>
#include <vector>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl::predict {

struct PredictorConfig {
  int horizon = 20;             // T_p, steps
  int rollouts = 8;             // M per enemy
  double link_threshold = 2.0;  // m, average-linkage stopping distance
  double escape_distance = 5.0; // d_4, m
  int candidates = 10;
  double heading_jitter = 0.1;  // rad, per-step std

  void validate() const;
};

/// p + dt * v_now + 0.5 * dt^2 * (v_now - v_prev) / dt
Vec2 second_order_step(Vec2 p, Vec2 v_now, Vec2 v_prev, double dt);

/// One potential-field pass: for every circle closer than `clearance`
/// (rho_2 + rho_3) adds dt * d3 * unit(p - center), d3 = clearance - |p - center|.
/// A point exactly on a center is pushed along +x.
Vec2 potential_field_correct(Vec2 p, const ObstacleSet& obstacles, double clearance, double dt);

/// Observed positions of one enemy, ascending in step index.
struct TrackHistory {
  int enemy_id = -1;
  std::vector<std::int64_t> steps;
  std::vector<Vec2> positions;

  bool empty() const { return positions.empty(); }
  void append(std::int64_t step, Vec2 p);
};

struct PredictedTrajectory {
  int enemy_id = -1;
  int rollout_id = 0;
  std::vector<Vec2> positions;  // steps T_n+1 ... T_n+T_p
};

/// Iterates second_order_step + potential_field_correct from the most recent
/// sample, rotating the extrapolated velocity by N(0, heading_jitter) each
/// step. Velocities come from finite differences of the history (zero with a
/// single sample) and are capped at v_max; positions are clamped to the arena.
/// Returns an empty list for an empty history.
std::vector<PredictedTrajectory> rollout(const TrackHistory& history, const PredictorConfig& cfg,
                                         const EngagementConfig& engagement, const ObstacleSet& obstacles,
                                         Rng& rng);

struct ClusterSet {
  std::vector<int> labels;   // cluster index per point
  std::vector<Vec2> centers; // mean of members
  std::vector<int> sizes;

  std::size_t size() const { return centers.size(); }
};

/// Agglomerative average-linkage clustering that merges while the smallest
/// inter-cluster distance is below `link_threshold`. Clusters are numbered in
/// order of their lowest-index member. Runs the nearest-neighbour-chain
/// algorithm in O(n^2) time and memory.
ClusterSet cluster(std::span<const Vec2> points, double link_threshold);

/// Nearest cluster center to p (ties: lowest index); the arena center when
/// there are no clusters.
Vec2 search_subgoal(const ClusterSet& clusters, Vec2 p, const Arena& arena);

struct CandidatePoint {
  Vec2 position;
  double nearest_cluster_distance = 0.0;
};

struct EscapeCandidates {
  std::vector<CandidatePoint> points;
  double effective_distance = 0.0;  // d_4 after any relaxation
  int relaxations = 0;
};

/// Rejection-samples uniform arena points that are farther than d_4 from
/// every cluster center and outside every obstacle clearance disc. After
/// 10^4 consecutive rejections d_4 is multiplied by 0.8.
EscapeCandidates escape_candidates(const ClusterSet& clusters, const EngagementConfig& engagement,
                                   const ObstacleSet& obstacles, double escape_distance, int count, Rng& rng);

/// Nearest candidate to p (ties: lowest index). Throws on an empty list.
Vec2 escape_subgoal(std::span<const CandidatePoint> candidates, Vec2 p);

}  // namespace swarmhrl::predict
