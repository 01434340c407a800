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
#include <iosfwd>
#include <optional>

#include "swarmhrl/nn/adam.hpp"
#include "swarmhrl/nn/mlp.hpp"

namespace swarmhrl::nn {

inline constexpr int kCheckpointVersion = 1;

struct MlpRecord {
  Mlp mlp;
  std::optional<AdamState> adam;
};

// Text format, one token stream:
//   swarmhrl-mlp <version>
//   dims <n> d0 ... d{n-1}
//   head linear | head bounded lo0 hi0 lo1 hi1 ...
//   layer <l> <rows> <cols> w(0,0) w(0,1) ... b0 b1 ...
//   adam <step> lr beta1 beta2 eps   (then m and v in layer order)   | noadam
// Reals are written as hexfloats so a reload is bit-exact.
void save_mlp(std::ostream& os, const Mlp& mlp, const AdamState* adam = nullptr);
MlpRecord load_mlp(std::istream& is);

void save_mlp_file(const std::filesystem::path& path, const Mlp& mlp, const AdamState* adam = nullptr);
MlpRecord load_mlp_file(const std::filesystem::path& path);

}  // namespace swarmhrl::nn
