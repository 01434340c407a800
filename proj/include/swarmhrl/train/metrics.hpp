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
#include <fstream>
#include <ostream>
#include <vector>

#include "swarmhrl/train/trainer.hpp"

namespace swarmhrl {

/// Bumped whenever a column is added, removed or reinterpreted.
inline constexpr int kMetricsSchemaVersion = 2;

// Deterministic per-episode training metrics (no wall-clock values).
void write_training_header(std::ostream& os);
void write_training_row(std::ostream& os, const EpisodeRecord& r);
void write_training_metrics(const std::filesystem::path& path, const std::vector<EpisodeRecord>& records);

// Wall-clock decision times, kept apart so metrics.csv stays reproducible.
void write_timing_header(std::ostream& os);
void write_timing_row(std::ostream& os, const EpisodeRecord& r);

void write_eval_metrics(const std::filesystem::path& path, const EvalResult& result);
void write_sweep_metrics(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

/// Opens a file for writing or throws ConfigError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace swarmhrl
