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

#include <vector>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

/// Encloses a rectangle with a grid of circles of the given radius.
///
/// Centers sit at the centers of a uniform grid whose cells have a
/// half-diagonal of at most `radius`, so every cell (and hence the rectangle)
/// is covered. Grid spacing along each axis is at most radius * sqrt(2).
/// Throws std::invalid_argument for a rectangle with zero area or a
/// non-positive radius.
std::vector<Circle> cover_rectangle(const Rect& rect, double radius);

/// Shortest distance from `p` to the segment a-b.
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// True iff the segment a-b stays at distance >= radius from every obstacle
/// circle center (a tangent segment does not block).
bool line_of_sight(Vec2 a, Vec2 b, const ObstacleSet& obstacles);

}  // namespace swarmhrl
