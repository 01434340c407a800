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

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace swarmhrl::nn {

/// Hidden widths shared by every network in the stack.
inline const std::vector<int> kHiddenWidths = {128, 64, 32};

enum class HeadKind { Linear, Bounded };

/// Output squashing. A bounded head maps each logit z to
/// lo + (hi - lo) * (1 + tanh z) / 2, strictly inside (lo, hi).
struct OutputHead {
  HeadKind kind = HeadKind::Linear;
  std::vector<double> lo;
  std::vector<double> hi;

  static OutputHead linear() { return {}; }
  static OutputHead bounded(std::vector<double> lo, std::vector<double> hi);
  bool operator==(const OutputHead&) const = default;
};

struct Layer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Activations kept by a forward pass for the matching backward pass.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;  // input of each layer, one column per sample
  std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
};

/// Fully connected ReLU network. Inputs are batched column-wise (dim x batch).
class Mlp {
 public:
  Mlp() = default;
  /// Zero-initialized network with layer widths `dims` = {in, h1, ..., out}.
  Mlp(std::vector<int> dims, OutputHead head);

  /// He-uniform weights, zero biases.
  static Mlp he_uniform(std::vector<int> dims, OutputHead head, std::mt19937_64& rng);
  /// {in, 128, 64, 32, out}
  static std::vector<int> standard_dims(int in, int out);

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  const std::vector<int>& dims() const { return dims_; }
  const OutputHead& head() const { return head_; }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t parameter_count() const;
  bool all_finite() const;
  bool same_shape(const Mlp& other) const;

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, ForwardCache& cache) const;
  Eigen::VectorXd forward(std::span<const double> x) const;

  /// Output of the last affine layer, before the head.
  Eigen::MatrixXd logits(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd logits(const Eigen::MatrixXd& x, ForwardCache& cache) const;
  Eigen::MatrixXd apply_head(const Eigen::MatrixXd& z) const;
  /// Elementwise derivative of the head at logits z.
  Eigen::MatrixXd head_derivative(const Eigen::MatrixXd& z) const;

 private:
  std::vector<int> dims_;
  OutputHead head_;
  std::vector<Layer> layers_;
};

/// Partial derivatives with the same shapes as an Mlp's layers.
struct Gradients {
  std::vector<Layer> layers;

  static Gradients zeros_like(const Mlp& mlp);
  bool all_finite() const;
  double squared_norm() const;
  Gradients& operator+=(const Gradients& other);
  Gradients& operator*=(double s);
};

/// Exact gradients of sum(upstream .* output) with respect to every parameter,
/// where output is the post-head forward result cached in `cache`. When
/// `input_grad` is given it receives the gradient with respect to the input.
Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& upstream,
                   Eigen::MatrixXd* input_grad = nullptr);

/// Same as backward() but starting from a gradient with respect to the logits.
Gradients backward_logits(const Mlp& mlp, const ForwardCache& cache, Eigen::MatrixXd logit_grad,
                          Eigen::MatrixXd* input_grad = nullptr);

/// Copies a std::vector of inputs into a column matrix.
Eigen::MatrixXd as_column(std::span<const double> x);

}  // namespace swarmhrl::nn
