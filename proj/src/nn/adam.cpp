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

#include "swarmhrl/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmhrl::nn {

AdamState AdamState::for_model(const Mlp& mlp, AdamConfig config) {
  return {config, Gradients::zeros_like(mlp), Gradients::zeros_like(mlp), 0};
}

bool adam_step(Mlp& mlp, const Gradients& grads, AdamState& state) {
  auto& layers = mlp.layers();
  if (grads.layers.size() != layers.size() || state.m.layers.size() != layers.size())
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  if (!grads.all_finite()) return false;

  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double corr1 = 1.0 - std::pow(c.beta1, t);
  const double corr2 = 1.0 - std::pow(c.beta2, t);

  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
    param.array() -= c.lr * (m.array() / corr1) / ((v.array() / corr2).sqrt() + c.epsilon);
  };
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weight, grads.layers[l].weight, state.m.layers[l].weight, state.v.layers[l].weight);
    update(layers[l].bias, grads.layers[l].bias, state.m.layers[l].bias, state.v.layers[l].bias);
  }
  return true;
}

void sync_target(const Mlp& source, Mlp& target, SyncMode mode) {
  if (!source.same_shape(target)) throw std::invalid_argument("sync_target: shape mismatch");
  if (mode.kind == SyncMode::Kind::Hard) {
    target = source;
    return;
  }
  const double tau = mode.tau;
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("sync_target: tau must lie in [0, 1]");
  if (tau == 1.0) {
    target = source;
    return;
  }
  if (tau == 0.0) return;
  auto& dst = target.layers();
  const auto& src = source.layers();
  for (std::size_t l = 0; l < dst.size(); ++l) {
    dst[l].weight = tau * src[l].weight + (1.0 - tau) * dst[l].weight;
    dst[l].bias = tau * src[l].bias + (1.0 - tau) * dst[l].bias;
  }
}

}  // namespace swarmhrl::nn
