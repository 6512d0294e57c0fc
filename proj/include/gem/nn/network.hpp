// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "gem/core/types.hpp"
#include "gem/kernels/kernels.hpp"
#include "gem/nn/matrix.hpp"
#include "gem/random.hpp"

namespace gem::nn {

/// Affine map followed by an activation; no activation means identity.
struct DenseLayer {
  Matrix weights;  // out × in
  std::vector<double> bias;
  std::optional<ActivationSpec> activation;

  std::size_t in() const { return weights.cols(); }
  std::size_t out() const { return weights.rows(); }
};

/// β_N(xWᵀ) ⊙ (xVᵀ).
struct GmgluLayer {
  Matrix w;  // hidden × in
  Matrix v;  // hidden × in
  SmoothnessOrder n{1};

  std::size_t in() const { return w.cols(); }
  std::size_t out() const { return w.rows(); }
};

using Layer = std::variant<DenseLayer, GmgluLayer>;

struct Network {
  std::vector<Layer> layers;
  /// Bumped on every parameter update; tapes remember the value they saw.
  std::uint64_t version = 0;
};

/// Gradient storage shaped like the network's parameter list.
using ParamGrads = std::vector<std::vector<double>>;

// Per-layer record of what backward needs.
struct DenseTape {
  Matrix input;
  Matrix pre_activation;  // kept only for baseline activations
  std::optional<GateCache<double>> gates;
};

struct GmgluTape {
  Matrix input;
  GateCache<double> gates;  // of the W projection
  Matrix gated;             // β_N(xWᵀ)
  Matrix linear;            // xVᵀ
};

struct Tape {
  std::vector<std::variant<DenseTape, GmgluTape>> layers;
  std::uint64_t version = 0;
  std::size_t batch = 0;
};

/// Views onto every trainable tensor, in a fixed order: per layer, weights
/// then bias (dense) or W then V (GMGLU).
inline std::vector<std::span<double>> parameters(Network& net) {
  std::vector<std::span<double>> out;
  for (auto& layer : net.layers) {
    if (auto* d = std::get_if<DenseLayer>(&layer)) {
      out.emplace_back(d->weights.data());
      out.emplace_back(d->bias);
    } else {
      auto& g = std::get<GmgluLayer>(layer);
      out.emplace_back(g.w.data());
      out.emplace_back(g.v.data());
    }
  }
  return out;
}

inline ParamGrads zero_grads(Network& net) {
  ParamGrads grads;
  for (auto p : parameters(net)) grads.emplace_back(p.size(), 0.0);
  return grads;
}

inline std::size_t parameter_count(Network& net) {
  std::size_t n = 0;
  for (auto p : parameters(net)) n += p.size();
  return n;
}

/// Kaiming-uniform with gain 1: U(-√(3/fan_in), √(3/fan_in)).
inline void kaiming_uniform(Matrix& w, Rng& rng) {
  const double bound = std::sqrt(3.0 / static_cast<double>(w.cols()));
  for (auto& v : w.data()) v = rng.uniform(-bound, bound);
}

inline DenseLayer make_dense(std::size_t in, std::size_t out, std::optional<ActivationSpec> act, Rng& rng,
                             double bias_init = 0.0) {
  DenseLayer layer{Matrix(out, in), std::vector<double>(out, bias_init), std::move(act)};
  kaiming_uniform(layer.weights, rng);
  return layer;
}

inline GmgluLayer make_gmglu(std::size_t in, std::size_t hidden, SmoothnessOrder n, Rng& rng) {
  GmgluLayer layer{Matrix(hidden, in), Matrix(hidden, in), n};
  kaiming_uniform(layer.w, rng);
  kaiming_uniform(layer.v, rng);
  return layer;
}

/// input → hidden_layers × (dense + act) → linear classifier head.
/// Hidden biases start at `hidden_bias`; the head bias starts at zero.
inline Network make_mlp(std::size_t in, std::size_t width, std::size_t hidden_layers, std::size_t classes,
                        const ActivationSpec& act, std::uint64_t seed, double hidden_bias = 0.0) {
  Rng rng(seed);
  Network net;
  std::size_t fan_in = in;
  for (std::size_t i = 0; i < hidden_layers; ++i) {
    net.layers.emplace_back(make_dense(fan_in, width, act, rng, hidden_bias));
    fan_in = width;
  }
  net.layers.emplace_back(make_dense(fan_in, classes, std::nullopt, rng));
  return net;
}

namespace detail {

inline Matrix dense_forward(const DenseLayer& layer, const Matrix& x, DenseTape* tape) {
  Matrix z = affine(x, layer.weights, layer.bias);
  if (!layer.activation) {
    if (tape) tape->input = x;
    return z;
  }
  const ActivationSpec& spec = *layer.activation;
  const bool cache = tape != nullptr && is_gem_family(spec);
  ForwardResult<double> fwd = apply_forward<double>(z.data(), spec, cache);
  Matrix y(z.rows(), z.cols());
  y.data() = std::move(fwd.output);
  if (tape) {
    tape->input = x;
    if (cache) {
      tape->gates = std::move(fwd.cache);
    } else {
      tape->pre_activation = std::move(z);
    }
  }
  return y;
}

inline Matrix gmglu_forward(const GmgluLayer& layer, const Matrix& x, GmgluTape* tape) {
  const Matrix a = affine(x, layer.w);
  Matrix b = affine(x, layer.v);
  const ActivationSpec spec = Gem{layer.n};
  ForwardResult<double> fwd = apply_forward<double>(a.data(), spec, tape != nullptr);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = fwd.output[i] * b.data()[i];
  if (tape) {
    tape->input = x;
    tape->gates = std::move(*fwd.cache);
    tape->gated = Matrix(a.rows(), a.cols());
    tape->gated.data() = std::move(fwd.output);
    tape->linear = std::move(b);
  }
  return out;
}

}  // namespace detail

/// Single GMGLU layer application, optionally recording a tape.
inline Matrix gmglu_forward(const GmgluLayer& layer, const Matrix& x, GmgluTape* tape = nullptr) {
  return detail::gmglu_forward(layer, x, tape);
}

/// Runs the network; fills `tape` when given.
inline Matrix forward(const Network& net, const Matrix& batch, Tape* tape = nullptr) {
  if (net.layers.empty()) throw std::invalid_argument("network has no layers");
  if (tape) {
    tape->layers.clear();
    tape->version = net.version;
    tape->batch = batch.rows();
  }
  Matrix h = batch;
  for (const auto& layer : net.layers) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      DenseTape* t = nullptr;
      if (tape) t = &std::get<DenseTape>(tape->layers.emplace_back(DenseTape{}));
      h = detail::dense_forward(*d, h, t);
    } else {
      GmgluTape* t = nullptr;
      if (tape) t = &std::get<GmgluTape>(tape->layers.emplace_back(GmgluTape{}));
      h = detail::gmglu_forward(std::get<GmgluLayer>(layer), h, t);
    }
  }
  return h;
}

/// Backpropagates grad_logits through the recorded tape and returns
/// gradients for every parameter in parameters() order.
inline ParamGrads backward(Network& net, const Tape& tape, const Matrix& grad_logits) {
  if (tape.version != net.version || tape.layers.size() != net.layers.size()) {
    throw std::logic_error("stale tape: network changed since the forward pass");
  }
  require_dims(grad_logits.rows() == tape.batch, "grad_logits rows vs batch");
  ParamGrads grads = zero_grads(net);
  Matrix upstream = grad_logits;
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const std::size_t wi = 2 * li;
    if (auto* d = std::get_if<DenseLayer>(&net.layers[li])) {
      const auto& t = std::get<DenseTape>(tape.layers[li]);
      require_dims(upstream.cols() == d->out(), "upstream width vs layer output");
      Matrix dz(upstream.rows(), upstream.cols());
      if (!d->activation) {
        dz = upstream;
      } else if (t.gates) {
        dz.data() = apply_backward<double>(upstream.data(), *t.gates, *d->activation);
      } else {
        dz.data() = apply_backward_direct<double>(upstream.data(), t.pre_activation.data(), *d->activation);
      }
      Matrix dw(d->out(), d->in());
      accumulate_weight_grad(dz, t.input, dw);
      grads[wi] = std::move(dw.data());
      for (std::size_t r = 0; r < dz.rows(); ++r) {
        for (std::size_t o = 0; o < dz.cols(); ++o) grads[wi + 1][o] += dz(r, o);
      }
      if (li > 0) {
        Matrix dx(dz.rows(), d->in());
        accumulate_input_grad(dz, d->weights, dx);
        upstream = std::move(dx);
      }
    } else {
      auto& g = std::get<GmgluLayer>(net.layers[li]);
      const auto& t = std::get<GmgluTape>(tape.layers[li]);
      require_dims(upstream.cols() == g.out(), "upstream width vs GMGLU output");
      // out = β(a) ⊙ b: ∂/∂b = up ⊙ β(a), ∂/∂a = up ⊙ b ⊙ β'(a).
      Matrix db(upstream.rows(), upstream.cols());
      std::vector<double> up_times_b(upstream.size());
      for (std::size_t i = 0; i < upstream.size(); ++i) {
        db.data()[i] = upstream.data()[i] * t.gated.data()[i];
        up_times_b[i] = upstream.data()[i] * t.linear.data()[i];
      }
      Matrix da(upstream.rows(), upstream.cols());
      da.data() = apply_backward<double>(up_times_b, t.gates, Gem{g.n});
      Matrix dw(g.out(), g.in());
      Matrix dv(g.out(), g.in());
      accumulate_weight_grad(da, t.input, dw);
      accumulate_weight_grad(db, t.input, dv);
      grads[wi] = std::move(dw.data());
      grads[wi + 1] = std::move(dv.data());
      if (li > 0) {
        Matrix dx(da.rows(), g.in());
        accumulate_input_grad(da, g.w, dx);
        accumulate_input_grad(db, g.v, dx);
        upstream = std::move(dx);
      }
    }
  }
  return grads;
}

}  // namespace gem::nn
