// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gem/nn/network.hpp"

namespace gem::nn {

struct SgdMomentum {
  double lr = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
};

struct AdamW {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 1e-2;
  double eps = 1e-8;
};

using OptimizerConfig = std::variant<SgdMomentum, AdamW>;

struct ConstantSchedule {};
/// lr·γ^k after k milestones (epoch numbers) have passed.
struct MultiStepSchedule {
  std::vector<std::size_t> milestones;
  double gamma = 0.1;
};
/// Linear warm-up over warmup_steps, then cosine decay to 0 at the last step.
struct CosineSchedule {
  std::size_t warmup_steps = 0;
};

using ScheduleConfig = std::variant<ConstantSchedule, MultiStepSchedule, CosineSchedule>;

inline double base_lr(const OptimizerConfig& opt) {
  return std::visit([](const auto& o) { return o.lr; }, opt);
}

inline void validate(const OptimizerConfig& opt) {
  if (const auto* s = std::get_if<SgdMomentum>(&opt)) {
    if (!(s->lr > 0)) throw std::invalid_argument("lr must be positive");
    if (!(s->momentum >= 0 && s->momentum < 1)) throw std::invalid_argument("momentum must lie in [0, 1)");
    if (!(s->weight_decay >= 0)) throw std::invalid_argument("weight_decay must be non-negative");
  } else {
    const auto& a = std::get<AdamW>(opt);
    if (!(a.lr > 0)) throw std::invalid_argument("lr must be positive");
    if (!(a.beta1 > 0 && a.beta1 < 1) || !(a.beta2 > 0 && a.beta2 < 1)) {
      throw std::invalid_argument("beta1 and beta2 must lie in (0, 1)");
    }
    if (!(a.weight_decay >= 0)) throw std::invalid_argument("weight_decay must be non-negative");
  }
}

inline void validate(const ScheduleConfig& sched) {
  if (const auto* m = std::get_if<MultiStepSchedule>(&sched)) {
    if (!(m->gamma > 0 && m->gamma <= 1)) throw std::invalid_argument("gamma must lie in (0, 1]");
  }
}

/// Learning rate for a step, given the epoch it belongs to and the total
/// number of optimizer steps in the run.
inline double scheduled_lr(double lr0, const ScheduleConfig& sched, std::size_t epoch, std::size_t step,
                           std::size_t total_steps) {
  if (const auto* m = std::get_if<MultiStepSchedule>(&sched)) {
    double lr = lr0;
    for (std::size_t milestone : m->milestones) {
      if (epoch >= milestone) lr *= m->gamma;
    }
    return lr;
  }
  if (const auto* c = std::get_if<CosineSchedule>(&sched)) {
    if (step < c->warmup_steps) {
      return lr0 * static_cast<double>(step + 1) / static_cast<double>(c->warmup_steps);
    }
    const double span = static_cast<double>(std::max<std::size_t>(1, total_steps - c->warmup_steps));
    const double progress = static_cast<double>(step - c->warmup_steps) / span;
    return lr0 * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
  }
  return lr0;
}

/// Holds per-parameter optimizer state and applies updates in place.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, Network& net) : cfg_(cfg) {
    validate(cfg_);
    for (auto p : parameters(net)) {
      first_.emplace_back(p.size(), 0.0);
      second_.emplace_back(std::holds_alternative<AdamW>(cfg_) ? p.size() : 0, 0.0);
    }
  }

  void step(Network& net, const ParamGrads& grads, double lr) {
    auto params = parameters(net);
    if (grads.size() != params.size()) throw std::invalid_argument("gradient list does not match the network");
    ++t_;
    for (std::size_t k = 0; k < params.size(); ++k) {
      auto p = params[k];
      const auto& g = grads[k];
      if (g.size() != p.size()) throw std::invalid_argument("gradient shape does not match parameter");
      if (const auto* s = std::get_if<SgdMomentum>(&cfg_)) {
        auto& v = first_[k];
        for (std::size_t i = 0; i < p.size(); ++i) {
          const double gi = g[i] + s->weight_decay * p[i];
          v[i] = s->momentum * v[i] + gi;
          p[i] -= lr * v[i];
        }
      } else {
        const auto& a = std::get<AdamW>(cfg_);
        auto& m = first_[k];
        auto& v = second_[k];
        const double c1 = 1.0 - std::pow(a.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(a.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < p.size(); ++i) {
          p[i] -= lr * a.weight_decay * p[i];
          m[i] = a.beta1 * m[i] + (1.0 - a.beta1) * g[i];
          v[i] = a.beta2 * v[i] + (1.0 - a.beta2) * g[i] * g[i];
          p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + a.eps);
        }
      }
    }
    ++net.version;
  }

 private:
  OptimizerConfig cfg_;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
  std::uint64_t t_ = 0;
};

}  // namespace gem::nn
