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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gradcheck.hpp"
#include "swarmhrl/nn/adam.hpp"
#include "swarmhrl/nn/checkpoint.hpp"
#include "swarmhrl/nn/mlp.hpp"
#include "test_util.hpp"

namespace swarmhrl::nn {
namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = n(rng);
  return m;
}

void randomize_biases(Mlp& net, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 0.1);
  for (auto& l : net.layers())
    for (Eigen::Index k = 0; k < l.bias.size(); ++k) l.bias(k) = n(rng);
}

TEST(Mlp, ZeroNetworkGivesZero) {
  Mlp net({3, 4, 2}, OutputHead::linear());
  const Eigen::MatrixXd y = net.forward(Eigen::MatrixXd::Ones(3, 5));
  EXPECT_EQ(y, Eigen::MatrixXd::Zero(2, 5));
}

TEST(Mlp, IdentityLayerPassesNonNegativeInput) {
  Mlp net({3, 3, 3}, OutputHead::linear());
  net.layers()[0].weight = Eigen::MatrixXd::Identity(3, 3);
  net.layers()[1].weight = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd x(3, 1);
  x << 0.5, 0.0, 2.0;
  EXPECT_EQ(net.forward(x), x);
}

TEST(Mlp, ForwardIsDeterministic) {
  std::mt19937_64 rng(1);
  const Mlp net = Mlp::he_uniform(Mlp::standard_dims(7, 3), OutputHead::linear(), rng);
  const Eigen::MatrixXd x = random_matrix(7, 4, rng);
  EXPECT_EQ(net.forward(x), net.forward(x));
}

TEST(Mlp, RejectsWrongInputDim) {
  Mlp net({3, 2}, OutputHead::linear());
  EXPECT_THROW(net.forward(Eigen::MatrixXd::Zero(4, 1)), std::invalid_argument);
}

// Property: bounded outputs stay strictly inside the range, even for huge logits.
TEST(Mlp, BoundedHeadStrictlyInside) {
  std::mt19937_64 rng(2);
  Mlp net = Mlp::he_uniform({4, 8, 2}, OutputHead::bounded({0.0, -3.0}, {2.0, 3.0}), rng);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd y = net.forward(random_matrix(4, 8, rng, trial < 100 ? 1.0 : 1e6));
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
      ASSERT_GT(y(0, c), 0.0);
      ASSERT_LT(y(0, c), 2.0);
      ASSERT_GT(y(1, c), -3.0);
      ASSERT_LT(y(1, c), 3.0);
    }
  }
}

TEST(Backward, MatchesFiniteDifferencesLinearHead) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Mlp net = Mlp::he_uniform({5, 7, 6, 4, 3}, OutputHead::linear(), rng);
    randomize_biases(net, rng);
    const auto r = test::check_backward(net, random_matrix(5, 3, rng), random_matrix(3, 3, rng));
    EXPECT_LT(r.max_rel_error, 1e-4) << "trial " << trial;
    EXPECT_GT(r.checked, 0);
  }
}

TEST(Backward, MatchesFiniteDifferencesBoundedHead) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Mlp net = Mlp::he_uniform({4, 9, 5, 2}, OutputHead::bounded({0.0, -3.14}, {2.0, 3.14}), rng);
    randomize_biases(net, rng);
    const auto r = test::check_backward(net, random_matrix(4, 2, rng), random_matrix(2, 2, rng));
    EXPECT_LT(r.max_rel_error, 1e-4) << "trial " << trial;
  }
}

TEST(Backward, StandardShapeAllCoordinates) {
  std::mt19937_64 rng(5);
  Mlp net = Mlp::he_uniform(Mlp::standard_dims(12, 2), OutputHead::bounded({0.0, -1.0}, {2.0, 1.0}), rng);
  randomize_biases(net, rng);
  const auto r = test::check_backward(net, random_matrix(12, 2, rng), random_matrix(2, 2, rng));
  EXPECT_LT(r.max_rel_error, 1e-4);
  EXPECT_GT(r.checked, 10000);
}

TEST(BackwardLogits, MatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    Mlp net = Mlp::he_uniform({4, 6, 5, 3}, OutputHead::bounded({0, 0, 0}, {1, 1, 1}), rng);
    randomize_biases(net, rng);
    const Eigen::MatrixXd x = random_matrix(4, 3, rng);
    const Eigen::MatrixXd u = random_matrix(3, 3, rng);
    ForwardCache cache;
    net.logits(x, cache);
    const Gradients g = backward_logits(net, cache, u);
    auto loss = [&](const Mlp& m) { return u.cwiseProduct(m.logits(x)).sum(); };
    const auto r = test::check_parameters(net, g, loss, [&](const Mlp& m) { return test::relu_pattern(m, x); });
    EXPECT_LT(r.max_rel_error, 1e-4);
  }
}

TEST(Backward, ZeroUpstreamZeroGradients) {
  std::mt19937_64 rng(7);
  const Mlp net = Mlp::he_uniform({3, 5, 2}, OutputHead::linear(), rng);
  ForwardCache cache;
  net.forward(random_matrix(3, 4, rng), cache);
  EXPECT_EQ(backward(net, cache, Eigen::MatrixXd::Zero(2, 4)).squared_norm(), 0.0);
}

TEST(Backward, DeadReluBlocksGradient) {
  Mlp net({1, 2, 1}, OutputHead::linear());
  net.layers()[0].weight << 1.0, -1.0;  // unit 1 is dead for x > 0
  net.layers()[1].weight << 1.0, 1.0;
  ForwardCache cache;
  net.forward(Eigen::MatrixXd::Constant(1, 1, 2.0), cache);
  const Gradients g = backward(net, cache, Eigen::MatrixXd::Ones(1, 1));
  EXPECT_EQ(g.layers[0].weight(1, 0), 0.0);
  EXPECT_EQ(g.layers[0].bias(1), 0.0);
  EXPECT_EQ(g.layers[1].weight(0, 1), 0.0);
  EXPECT_EQ(g.layers[0].weight(0, 0), 2.0);
}

TEST(Adam, ConstantGradientMovesAgainstSign) {
  Mlp net({2, 1}, OutputHead::linear());
  AdamState st = AdamState::for_model(net);
  Gradients g = Gradients::zeros_like(net);
  g.layers[0].weight << 0.5, -2.0;
  for (int k = 0; k < 50; ++k) ASSERT_TRUE(adam_step(net, g, st));
  EXPECT_LT(net.layers()[0].weight(0, 0), 0.0);
  EXPECT_GT(net.layers()[0].weight(0, 1), 0.0);
}

TEST(Adam, ZeroGradientIsFixedPoint) {
  std::mt19937_64 rng(8);
  Mlp net = Mlp::he_uniform({3, 4, 2}, OutputHead::linear(), rng);
  const Mlp before = net;
  AdamState st = AdamState::for_model(net);
  ASSERT_TRUE(adam_step(net, Gradients::zeros_like(net), st));
  for (std::size_t l = 0; l < net.layers().size(); ++l) EXPECT_EQ(net.layers()[l].weight, before.layers()[l].weight);
}

// First bias-corrected step: m_hat = g, v_hat = g^2, so the move is lr * g / (|g| + eps).
TEST(Adam, FirstStepClosedForm) {
  Mlp net({2, 1}, OutputHead::linear());
  AdamConfig cfg;
  AdamState st = AdamState::for_model(net, cfg);
  Gradients g = Gradients::zeros_like(net);
  g.layers[0].weight << 0.3, -1e-3;
  adam_step(net, g, st);
  EXPECT_NEAR(net.layers()[0].weight(0, 0), -cfg.lr * 0.3 / (0.3 + cfg.epsilon), 1e-15);
  EXPECT_NEAR(net.layers()[0].weight(0, 1), cfg.lr * 1e-3 / (1e-3 + cfg.epsilon), 1e-15);
  EXPECT_EQ(st.step, 1);
}

TEST(Adam, NonFiniteGradientIsRejected) {
  Mlp net({2, 1}, OutputHead::linear());
  AdamState st = AdamState::for_model(net);
  Gradients g = Gradients::zeros_like(net);
  g.layers[0].weight(0, 0) = std::nan("");
  EXPECT_FALSE(adam_step(net, g, st));
  EXPECT_EQ(st.step, 0);
  EXPECT_TRUE(net.all_finite());
}

TEST(Sync, HardAndPolyak) {
  std::mt19937_64 rng(9);
  const Mlp src = Mlp::he_uniform({3, 4, 2}, OutputHead::linear(), rng);
  const Mlp orig = Mlp::he_uniform({3, 4, 2}, OutputHead::linear(), rng);

  Mlp t = orig;
  sync_target(src, t);
  for (std::size_t l = 0; l < t.layers().size(); ++l) EXPECT_EQ(t.layers()[l].weight, src.layers()[l].weight);

  t = orig;
  sync_target(src, t, SyncMode::polyak(0.0));
  for (std::size_t l = 0; l < t.layers().size(); ++l) EXPECT_EQ(t.layers()[l].weight, orig.layers()[l].weight);

  t = orig;
  sync_target(src, t, SyncMode::polyak(1.0));
  for (std::size_t l = 0; l < t.layers().size(); ++l) EXPECT_EQ(t.layers()[l].weight, src.layers()[l].weight);

  t = orig;
  sync_target(src, t, SyncMode::polyak(0.25));
  EXPECT_NEAR(t.layers()[0].weight(0, 0), 0.25 * src.layers()[0].weight(0, 0) + 0.75 * orig.layers()[0].weight(0, 0),
              1e-15);

  Mlp other({3, 5, 2}, OutputHead::linear());
  EXPECT_THROW(sync_target(src, other), std::invalid_argument);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  std::mt19937_64 rng(10);
  Mlp net = Mlp::he_uniform({3, 4, 2}, OutputHead::bounded({0.0, -3.0}, {2.0, 3.0}), rng);
  AdamState st = AdamState::for_model(net);
  Gradients g = Gradients::zeros_like(net);
  g.layers[0].weight.setConstant(0.1);
  adam_step(net, g, st);
  std::stringstream ss;
  save_mlp(ss, net, &st);
  const MlpRecord rec = load_mlp(ss);
  ASSERT_TRUE(rec.mlp.same_shape(net));
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    EXPECT_EQ(rec.mlp.layers()[l].weight, net.layers()[l].weight);
    EXPECT_EQ(rec.mlp.layers()[l].bias, net.layers()[l].bias);
  }
  ASSERT_TRUE(rec.adam.has_value());
  EXPECT_EQ(rec.adam->step, 1);
  EXPECT_EQ(rec.adam->m.layers[0].weight, st.m.layers[0].weight);
}

TEST(Checkpoint, MalformedInputThrows) {
  std::stringstream ss("swarmhrl-mlp 1\ndims 2 3");
  EXPECT_ANY_THROW(load_mlp(ss));
  std::stringstream wrong("not-a-checkpoint");
  EXPECT_ANY_THROW(load_mlp(wrong));
}

}  // namespace
}  // namespace swarmhrl::nn
