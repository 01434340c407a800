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

#include <filesystem>
#include <optional>
#include <vector>

#include "swarmhrl/nn/adam.hpp"
#include "swarmhrl/nn/mlp.hpp"
#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

/// The decentralized networks of one trained team: one actor and one Q
/// network per training agent. Teams of another size reuse them by index
/// modulo the count.
struct PolicyBundle {
  std::vector<nn::Mlp> actors;
  std::vector<nn::Mlp> qnets;
  SlotConfig slots;
  int h = 10;
  // Optimizer moments, only present in training snapshots.
  std::vector<nn::AdamState> actor_adam;
  std::vector<nn::AdamState> qnet_adam;

  /// Throws ConfigError unless the network shapes fit `slots`.
  void validate() const;
};

inline constexpr int kPolicyFormatVersion = 1;

/// Writes policy.json plus actor_<k>.mlp / qnet_<k>.mlp into `dir`.
void save_policy(const PolicyBundle& bundle, const std::filesystem::path& dir);
/// Throws ConfigError on a missing or malformed checkpoint, and when
/// `expected_slots` is given and differs from the stored capacities.
PolicyBundle load_policy(const std::filesystem::path& dir, const std::optional<SlotConfig>& expected_slots = {});

}  // namespace swarmhrl
