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

#include "swarmhrl/lower/rewards.hpp"

#include <algorithm>
#include <stdexcept>

namespace swarmhrl {

double intrinsic_reward(Vec2 p_now, Vec2 p_start, Vec2 subgoal, double floor) {
  const double denom = std::max(distance(subgoal, p_start), floor);
  return -distance(subgoal, p_now) / denom;
}

double lower_reward(std::span<const double> r_a, std::span<const double> r_b, double eps1) {
  if (r_a.size() != r_b.size()) throw std::invalid_argument("lower_reward: size mismatch");
  if (!(eps1 >= 0.0 && eps1 <= 1.0)) throw std::invalid_argument("lower_reward: eps1 must lie in [0, 1]");
  double total = 0.0;
  for (std::size_t i = 0; i < r_a.size(); ++i) total += eps1 * r_a[i] + (1.0 - eps1) * r_b[i];
  return total;
}

}  // namespace swarmhrl
