// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <variant>
#include <vector>

#include "gem/core/types.hpp"
#include "gem/nn/data.hpp"
#include "gem/nn/loss.hpp"
#include "gem/nn/network.hpp"
#include "gem/nn/optim.hpp"
#include "gem/random.hpp"

namespace gem::nn {

struct DeadNeuronResult {
  /// Σ |∂L/∂θ| over the first layer's weights and biases, summed over every
  /// minibatch of the epoch.
  double first_layer_grad_l1 = 0;
  /// Largest |Δθ| of any first-layer parameter after the epoch.
  double first_layer_max_change = 0;
  std::size_t steps = 0;
};

/// One epoch of plain SGD on the blobs set through a 2 → width → 2 network
/// whose first-layer biases start at `bias`. With the default bias of −10
/// every first-layer pre-activation is negative for every sample, since the
/// inputs stay within a few units of the origin and the Kaiming weights are
/// bounded by √(3/2).
inline DeadNeuronResult dead_neuron_epoch(const ActivationSpec& act, std::uint64_t seed, double bias = -10.0,
                                          std::size_t width = 16) {
  const Dataset data = make_synthetic(SyntheticKind::Blobs, 64, 0.25, seed + 2);
  Network net = make_mlp(2, width, 1, 2, act, seed + 1);
  auto& first = std::get<DenseLayer>(net.layers.front());
  for (double& b : first.bias) b = bias;
  const Matrix w0 = first.weights;
  const std::vector<double> b0 = first.bias;

  Optimizer opt(SgdMomentum{0.1, 0.0, 0.0}, net);
  Rng rng(seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  DeadNeuronResult result;
  constexpr std::size_t kBatch = 16;
  for (std::size_t start = 0; start < order.size(); start += kBatch) {
    const std::size_t m = std::min(kBatch, order.size() - start);
    Matrix x(m, 2);
    std::vector<int> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      x(i, 0) = data.features(order[start + i], 0);
      x(i, 1) = data.features(order[start + i], 1);
      y[i] = data.labels[order[start + i]];
    }
    Tape tape;
    const LossResult res = softmax_cross_entropy(forward(net, x, &tape), y);
    const ParamGrads grads = backward(net, tape, res.grad_logits);
    for (std::size_t k = 0; k < 2; ++k) {
      for (double g : grads[k]) result.first_layer_grad_l1 += std::abs(g);
    }
    opt.step(net, grads, 0.1);
    ++result.steps;
  }

  const auto& after = std::get<DenseLayer>(net.layers.front());
  for (std::size_t i = 0; i < w0.data().size(); ++i) {
    result.first_layer_max_change =
        std::max(result.first_layer_max_change, std::abs(after.weights.data()[i] - w0.data()[i]));
  }
  for (std::size_t i = 0; i < b0.size(); ++i) {
    result.first_layer_max_change = std::max(result.first_layer_max_change, std::abs(after.bias[i] - b0[i]));
  }
  return result;
}

}  // namespace gem::nn
