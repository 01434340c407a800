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

#include "swarmhrl/sim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmhrl {

std::vector<Circle> cover_rectangle(const Rect& rect, double radius) {
  if (!(rect.width > 0.0) || !(rect.height > 0.0))
    throw std::invalid_argument("cover_rectangle: rectangle must have positive width and height");
  if (!(radius > 0.0)) throw std::invalid_argument("cover_rectangle: radius must be positive");

  const double max_spacing = radius * std::sqrt(2.0);
  const int nx = std::max(1, static_cast<int>(std::ceil(rect.width / max_spacing - 1e-12)));
  const int ny = std::max(1, static_cast<int>(std::ceil(rect.height / max_spacing - 1e-12)));
  const double sx = rect.width / nx;
  const double sy = rect.height / ny;
  const Vec2 origin = rect.center - Vec2{0.5 * rect.width, 0.5 * rect.height};

  std::vector<Circle> circles;
  circles.reserve(static_cast<std::size_t>(nx) * ny);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      circles.push_back({origin + Vec2{(ix + 0.5) * sx, (iy + 0.5) * sy}, radius});
  return circles;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

bool line_of_sight(Vec2 a, Vec2 b, const ObstacleSet& obstacles) {
  for (const auto& c : obstacles.circles)
    if (point_segment_distance(c.center, a, b) < c.radius) return false;
  return true;
}

}  // namespace swarmhrl
