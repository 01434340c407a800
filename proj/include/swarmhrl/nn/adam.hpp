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

#include "swarmhrl/nn/mlp.hpp"

namespace swarmhrl::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  Gradients m;  // first moments
  Gradients v;  // second moments
  std::int64_t step = 0;

  static AdamState for_model(const Mlp& mlp, AdamConfig config = {});
};

/// Bias-corrected Adam update. A gradient with any non-finite entry leaves
/// both the network and the optimizer state untouched and returns false.
bool adam_step(Mlp& mlp, const Gradients& grads, AdamState& state);

struct SyncMode {
  enum class Kind { Hard, Polyak };
  Kind kind = Kind::Hard;
  double tau = 1.0;

  static SyncMode hard() { return {Kind::Hard, 1.0}; }
  static SyncMode polyak(double tau) { return {Kind::Polyak, tau}; }
};

/// target <- source (hard) or target <- tau * source + (1 - tau) * target.
/// Throws std::invalid_argument when the shapes differ.
void sync_target(const Mlp& source, Mlp& target, SyncMode mode = SyncMode::hard());

}  // namespace swarmhrl::nn
