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

#include "swarmhrl/sim/observation.hpp"

namespace swarmhrl {

struct UncertaintyConfig {
  double loss_rate = 0.0;    // probability an ally message is dropped
  double noise_sigma = 0.0;  // relative std of sensor noise

  bool active() const { return loss_rate > 0.0 || noise_sigma > 0.0; }
};

/// Drops each valid ally slot with probability loss_rate (zeroed, mask 0) and
/// multiplies every component of the remaining valid slots by (1 + sigma * N(0,1)).
/// Own position and velocity are left untouched. Draws nothing when both
/// parameters are zero.
LowerObservation apply_uncertainty(LowerObservation obs, const UncertaintyConfig& u, Rng& rng);
UpperObservation apply_uncertainty(UpperObservation obs, const UncertaintyConfig& u, Rng& rng);

}  // namespace swarmhrl
