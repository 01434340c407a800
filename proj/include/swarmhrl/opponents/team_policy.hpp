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

#include <memory>
#include <vector>

#include "swarmhrl/sim/types.hpp"

namespace swarmhrl {

/// What one live agent does this step.
struct AgentCommand {
  int id = 0;
  TaskKind task = TaskKind::Searching;
  Vec2 subgoal;
  LowerAction action;
};

/// Drives every live agent of one team. Implementations write the chosen task
/// flags into the world so allies can observe them.
class TeamPolicy {
 public:
  virtual ~TeamPolicy() = default;
  virtual const char* name() const = 0;
  virtual void reset(const WorldState& world, Team team) = 0;
  virtual std::vector<AgentCommand> act(WorldState& world, Rng& rng) = 0;
};

/// Scatters commands into a per-agent action vector (index == id); agents
/// without a command get a zero action.
void write_actions(const std::vector<AgentCommand>& commands, std::vector<LowerAction>& actions);

}  // namespace swarmhrl
