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

namespace swarmhrl {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent seed for (base seed, named stream, index).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) {
  return mix64(mix64(mix64(base) ^ stream) ^ index);
}

namespace streams {
inline constexpr std::uint64_t kTrainInstance = 0x7472616e;
inline constexpr std::uint64_t kEvalInstance = 0x6576616c;
inline constexpr std::uint64_t kWorld = 0x776f726c;
inline constexpr std::uint64_t kBlue = 0x626c7565;
inline constexpr std::uint64_t kRed = 0x72656400;
inline constexpr std::uint64_t kInit = 0x696e6974;
inline constexpr std::uint64_t kLearn = 0x6c726e00;
inline constexpr std::uint64_t kLayout = 0x6c61796f;
}  // namespace streams

}  // namespace swarmhrl
