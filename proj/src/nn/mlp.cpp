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

#include "swarmhrl/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swarmhrl::nn {

OutputHead OutputHead::bounded(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("bounded head: lo/hi size mismatch");
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (!(lo[k] < hi[k])) throw std::invalid_argument("bounded head: empty range");
  return {HeadKind::Bounded, std::move(lo), std::move(hi)};
}

Mlp::Mlp(std::vector<int> dims, OutputHead head) : dims_(std::move(dims)), head_(std::move(head)) {
  if (dims_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
  for (int d : dims_)
    if (d <= 0) throw std::invalid_argument("Mlp: layer widths must be positive");
  if (head_.kind == HeadKind::Bounded && head_.lo.size() != static_cast<std::size_t>(dims_.back()))
    throw std::invalid_argument("Mlp: bounded head size does not match output dim");
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l)
    layers_.push_back({Eigen::MatrixXd::Zero(dims_[l + 1], dims_[l]), Eigen::VectorXd::Zero(dims_[l + 1])});
}

Mlp Mlp::he_uniform(std::vector<int> dims, OutputHead head, std::mt19937_64& rng) {
  Mlp mlp(std::move(dims), std::move(head));
  for (auto& layer : mlp.layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.cols()));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = u(rng);
  }
  return mlp;
}

std::vector<int> Mlp::standard_dims(int in, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), kHiddenWidths.begin(), kHiddenWidths.end());
  dims.push_back(out);
  return dims;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

bool Mlp::all_finite() const {
  for (const auto& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

bool Mlp::same_shape(const Mlp& other) const { return dims_ == other.dims_ && head_ == other.head_; }

Eigen::MatrixXd Mlp::logits(const Eigen::MatrixXd& x) const {
  if (x.rows() != input_dim())
    throw std::invalid_argument("Mlp::forward: input dim " + std::to_string(x.rows()) + " != " +
                                std::to_string(input_dim()));
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * a;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

Eigen::MatrixXd Mlp::logits(const Eigen::MatrixXd& x, ForwardCache& cache) const {
  if (x.rows() != input_dim())
    throw std::invalid_argument("Mlp::forward: input dim " + std::to_string(x.rows()) + " != " +
                                std::to_string(input_dim()));
  cache.inputs.resize(layers_.size());
  cache.pre.resize(layers_.size());
  cache.inputs[0] = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    cache.pre[l] = layers_[l].weight * cache.inputs[l];
    cache.pre[l].colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) cache.inputs[l + 1] = cache.pre[l].cwiseMax(0.0);
  }
  return cache.pre.back();
}

Eigen::MatrixXd Mlp::apply_head(const Eigen::MatrixXd& z) const {
  if (head_.kind == HeadKind::Linear) return z;
  Eigen::MatrixXd out(z.rows(), z.cols());
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double lo = head_.lo[static_cast<std::size_t>(r)];
    const double hi = head_.hi[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
      double v = lo + (hi - lo) * 0.5 * (1.0 + std::tanh(z(r, c)));
      if (v >= hi) v = std::nextafter(hi, lo);
      if (v <= lo) v = std::nextafter(lo, hi);
      out(r, c) = v;
    }
  }
  return out;
}

Eigen::MatrixXd Mlp::head_derivative(const Eigen::MatrixXd& z) const {
  if (head_.kind == HeadKind::Linear) return Eigen::MatrixXd::Ones(z.rows(), z.cols());
  Eigen::MatrixXd d(z.rows(), z.cols());
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double half_range = 0.5 * (head_.hi[static_cast<std::size_t>(r)] - head_.lo[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
      const double t = std::tanh(z(r, c));
      d(r, c) = half_range * (1.0 - t * t);
    }
  }
  return d;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const { return apply_head(logits(x)); }

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, ForwardCache& cache) const {
  return apply_head(logits(x, cache));
}

Eigen::VectorXd Mlp::forward(std::span<const double> x) const { return forward(as_column(x)).col(0); }

Gradients Gradients::zeros_like(const Mlp& mlp) {
  Gradients g;
  for (const auto& l : mlp.layers())
    g.layers.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                        Eigen::VectorXd::Zero(l.bias.size())});
  return g;
}

bool Gradients::all_finite() const {
  for (const auto& l : layers)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& l : layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

Gradients& Gradients::operator+=(const Gradients& other) {
  if (other.layers.size() != layers.size()) throw std::invalid_argument("Gradients: shape mismatch");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].weight += other.layers[l].weight;
    layers[l].bias += other.layers[l].bias;
  }
  return *this;
}

Gradients& Gradients::operator*=(double s) {
  for (auto& l : layers) {
    l.weight *= s;
    l.bias *= s;
  }
  return *this;
}

Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& upstream,
                   Eigen::MatrixXd* input_grad) {
  if (cache.pre.size() != mlp.layers().size()) throw std::invalid_argument("backward: stale forward cache");
  const Eigen::MatrixXd& z_out = cache.pre.back();
  if (upstream.rows() != z_out.rows() || upstream.cols() != z_out.cols())
    throw std::invalid_argument("backward: upstream shape does not match output");
  return backward_logits(mlp, cache, upstream.cwiseProduct(mlp.head_derivative(z_out)), input_grad);
}

Gradients backward_logits(const Mlp& mlp, const ForwardCache& cache, Eigen::MatrixXd delta,
                          Eigen::MatrixXd* input_grad) {
  const auto& layers = mlp.layers();
  if (cache.pre.size() != layers.size()) throw std::invalid_argument("backward: stale forward cache");
  if (delta.rows() != cache.pre.back().rows() || delta.cols() != cache.pre.back().cols())
    throw std::invalid_argument("backward: logit gradient shape does not match output");

  Gradients grads;
  grads.layers.resize(layers.size());
  for (std::size_t l = layers.size(); l-- > 0;) {
    grads.layers[l].weight = delta * cache.inputs[l].transpose();
    grads.layers[l].bias = delta.rowwise().sum();
    if (l == 0 && input_grad == nullptr) break;
    Eigen::MatrixXd back = layers[l].weight.transpose() * delta;
    if (l == 0) {
      *input_grad = std::move(back);
      break;
    }
    delta = back.cwiseProduct((cache.pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return grads;
}

Eigen::MatrixXd as_column(std::span<const double> x) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(x.size()), 1);
  for (std::size_t k = 0; k < x.size(); ++k) m(static_cast<Eigen::Index>(k), 0) = x[k];
  return m;
}

}  // namespace swarmhrl::nn
