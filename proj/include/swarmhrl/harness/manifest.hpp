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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace swarmhrl {

inline constexpr const char* kVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Everything needed to rerun a command exactly.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<std::string> outputs;

  /// Hash of the compact dump of `config`, as 16 hex digits.
  std::string config_hash() const;
  nlohmann::json to_json() const;
};

/// Writes <dir>/manifest.json, creating the directory. Throws ConfigError.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace swarmhrl
