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

#include "swarmhrl/sim/uncertainty.hpp"

namespace swarmhrl {
namespace {

struct Perturber {
  const UncertaintyConfig& u;
  Rng& rng;
  std::bernoulli_distribution drop;
  std::normal_distribution<double> gauss{0.0, 1.0};

  Perturber(const UncertaintyConfig& cfg, Rng& r) : u(cfg), rng(r), drop(cfg.loss_rate) {}

  bool dropped() { return u.loss_rate > 0.0 && drop(rng); }

  void noise(Vec2& v) {
    if (u.noise_sigma <= 0.0) return;
    v.x *= 1.0 + u.noise_sigma * gauss(rng);
    v.y *= 1.0 + u.noise_sigma * gauss(rng);
  }
};

}  // namespace

LowerObservation apply_uncertainty(LowerObservation obs, const UncertaintyConfig& u, Rng& rng) {
  if (!u.active()) return obs;
  Perturber p(u, rng);
  for (auto& s : obs.allies) {
    if (!s.valid) continue;
    if (p.dropped()) {
      s = {};
      continue;
    }
    p.noise(s.rel_pos);
    p.noise(s.rel_vel);
  }
  for (auto& s : obs.enemies) {
    if (!s.valid) continue;
    p.noise(s.rel_pos);
    p.noise(s.rel_vel);
  }
  for (auto& s : obs.obstacles)
    if (s.valid) p.noise(s.rel_pos);
  return obs;
}

UpperObservation apply_uncertainty(UpperObservation obs, const UncertaintyConfig& u, Rng& rng) {
  if (!u.active()) return obs;
  Perturber p(u, rng);
  for (auto& s : obs.allies) {
    if (!s.valid) continue;
    if (p.dropped()) {
      s = {};
      continue;
    }
    p.noise(s.rel_pos);
    p.noise(s.vel);
  }
  for (auto& s : obs.enemies) {
    if (!s.valid) continue;
    p.noise(s.rel_pos);
    p.noise(s.vel);
  }
  return obs;
}

}  // namespace swarmhrl
