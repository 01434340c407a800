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

#include "swarmhrl/harness/manifest.hpp"

#include <fstream>

#include <fmt/format.h>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunManifest::config_hash() const { return fmt::format("{:016x}", fnv1a64(config.dump())); }

nlohmann::json RunManifest::to_json() const {
  return {{"tool", "swarmhrl"},
          {"version", kVersion},
          {"command", command},
          {"argv", argv},
          {"seed", seed},
          {"config_hash", config_hash()},
          {"config", config},
          {"outputs", outputs}};
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  std::ofstream os(dir / "manifest.json");
  if (!os) throw ConfigError("cannot write " + (dir / "manifest.json").string());
  os << manifest.to_json().dump(2) << '\n';
}

}  // namespace swarmhrl
