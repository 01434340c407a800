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

#include <span>

#include "swarmhrl/vec2.hpp"

namespace swarmhrl {

/// -1 when the agent collided (or hit the arena boundary) this step, else 0.
inline double avoidance_reward(bool flagged) { return flagged ? -1.0 : 0.0; }

inline constexpr double kIntrinsicDenominatorFloor = 1e-6;

/// -|q - p_now| / max(|q - p_start|, floor): -1 at the subtask start
/// position, 0 on the subgoal.
double intrinsic_reward(Vec2 p_now, Vec2 p_start, Vec2 subgoal,
                        double floor = kIntrinsicDenominatorFloor);

/// sum_i (eps1 * r_a[i] + (1 - eps1) * r_b[i]).
double lower_reward(std::span<const double> r_a, std::span<const double> r_b, double eps1);

}  // namespace swarmhrl
