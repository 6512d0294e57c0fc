// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Finite-difference derivative estimates.
//
// Central rule: the k-th central difference
//   δ_h^k f(x) = Σ_{j=0..k} (-1)^j C(k,j) f(x + (k/2 - j)h)
// divided by h^k has error c₁h² + c₂h⁴ + … for smooth f, so each Richardson
// level (step halved, weights 4^m) removes one even power: the error of
// `levels` extrapolations is O(h^{2 + 2·levels}). Sample points stay inside
// [x - 3h, x + 3h] for k ≤ 6.
//
// One-sided rule: forward (or backward) differences with points x ± j·h,
// j = 0..k. Error expansion is in every power of h, so Richardson weights are
// 2^m and `levels` extrapolations give O(h^{1 + levels}).

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gem::verify {

struct FiniteDiffConfig {
  int order = 1;
  double base_step = 1e-3;
  int richardson_levels = 2;
};

enum class Side { Left, Right };

namespace detail {

inline void validate(const FiniteDiffConfig& cfg) {
  if (cfg.order < 1 || cfg.order > 6) throw std::invalid_argument("finite_diff order must lie in 1..6");
  if (!(cfg.base_step >= 1e-6 && cfg.base_step <= 1e-1)) {
    throw std::invalid_argument("finite_diff base_step must lie in [1e-6, 1e-1]");
  }
  if (cfg.richardson_levels < 0 || cfg.richardson_levels > 4) {
    throw std::invalid_argument("finite_diff richardson_levels must lie in 0..4");
  }
}

inline double binomial(int k, int j) {
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c = c * (k - j + i) / i;
  return c;
}

template <class F>
double sample(const F& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw std::domain_error("finite_diff: f(" + std::to_string(x) + ") is not finite");
  return v;
}

template <class F>
double richardson(const F& estimate, double h, int levels, double ratio_base) {
  std::vector<double> prev(1, estimate(h));
  for (int i = 1; i <= levels; ++i) {
    std::vector<double> cur(static_cast<std::size_t>(i) + 1);
    cur[0] = estimate(h / std::pow(2.0, i));
    double factor = 1.0;
    for (int m = 1; m <= i; ++m) {
      factor *= ratio_base;
      cur[m] = cur[m - 1] + (cur[m - 1] - prev[m - 1]) / (factor - 1.0);
    }
    prev = std::move(cur);
  }
  return prev.back();
}

}  // namespace detail

/// Plain k-th central difference quotient δ_h^k f(x) / h^k, no extrapolation.
template <class F>
double central_difference(const F& f, double x, int order, double h) {
  double acc = 0.0;
  for (int j = 0; j <= order; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc += sign * detail::binomial(order, j) * detail::sample(f, x + (0.5 * order - j) * h);
  }
  return acc / std::pow(h, order);
}

/// One-sided k-th difference quotient using x, x ± h, …, x ± kh.
template <class F>
double one_sided_difference(const F& f, double x, int order, double h, Side side) {
  const double dir = side == Side::Right ? 1.0 : -1.0;
  double acc = 0.0;
  for (int j = 0; j <= order; ++j) {
    const double sign = ((order - j) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * detail::binomial(order, j) * detail::sample(f, x + dir * j * h);
  }
  return acc / std::pow(dir * h, order);
}

template <class F>
double finite_diff(const F& f, double x, const FiniteDiffConfig& cfg) {
  detail::validate(cfg);
  return detail::richardson([&](double h) { return central_difference(f, x, cfg.order, h); }, cfg.base_step,
                            cfg.richardson_levels, 4.0);
}

template <class F>
double finite_diff_one_sided(const F& f, double x, const FiniteDiffConfig& cfg, Side side) {
  detail::validate(cfg);
  return detail::richardson([&](double h) { return one_sided_difference(f, x, cfg.order, h, side); },
                            cfg.base_step, cfg.richardson_levels, 2.0);
}

}  // namespace gem::verify
