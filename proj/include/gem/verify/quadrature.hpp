// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "gem/core/analytic.hpp"
#include "gem/core/types.hpp"

namespace gem::verify {

struct QuadratureResult {
  double value = 0;
  double abs_error_estimate = 0;
  std::size_t subdivisions = 0;
  bool converged = false;
};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  friend bool operator<(const Segment& a, const Segment& b) { return a.error < b.error; }
};

/// 7-point Gauss / 15-point Kronrod pair on [lo, hi]. Error estimate uses the
/// usual (200|K-G|)^{3/2} scaling.
template <class F>
Segment gauss_kronrod15(const F& f, double lo, double hi) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * wk[7];
  double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += wk[j] * sum;
    if (j % 2 == 1) gauss += wg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  double err = std::abs(kronrod - gauss);
  if (err > 0) err = err * std::min(1.0, std::pow(200.0 * err / std::max(std::abs(kronrod), 1e-300), 1.5));
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {lo, hi, kronrod, err};
}

/// Globally adaptive integration: starts from the given breakpoints and
/// repeatedly bisects the segment with the largest error estimate.
template <class F>
QuadratureResult integrate_adaptive(const F& f, const std::vector<double>& breakpoints, double abs_tol,
                                    std::size_t max_segments = 4000) {
  std::priority_queue<Segment> heap;
  double total = 0;
  double error = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const Segment s = gauss_kronrod15(f, breakpoints[i], breakpoints[i + 1]);
    total += s.value;
    error += s.error;
    heap.push(s);
  }
  while (error > abs_tol && heap.size() < max_segments) {
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = gauss_kronrod15(f, worst.lo, mid);
    const Segment right = gauss_kronrod15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated update error.
  total = 0;
  error = 0;
  const std::size_t count = heap.size();
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error, count, error <= abs_tol};
}

/// ℓ^p norm of ReLU(x) - E-GEM(x), i.e. (∫₀^∞ (εx/(ε + x^{2N}))^p dx)^{1/p},
/// by adaptive quadrature on [0, X] where the tail bound
///   ∫_X^∞ (ε x^{1-2N})^p dx = ε^p X^{-k}/k,  k = p(2N-1) - 1,
/// is below a tenth of the budget. `tol` is absolute on the returned norm;
/// abs_error_estimate includes the tail bound.
inline QuadratureResult lp_distance_quadrature(int p, SmoothnessOrder n, Epsilon eps, double tol = 1e-10) {
  gem::detail::check_lp_convergence(p, n);
  if (!(tol > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
  const double e = eps.value();
  const int two_n = n.two_n();
  const double pd = p;
  const auto integrand = [&](double x) {
    const double t = std::pow(x, two_n);
    return std::pow(e * x / (e + t), pd);
  };
  const double knee = std::pow(e, 1.0 / two_n);

  // A lower bound for the integral fixes the integral-space tolerance: the
  // norm error is ΔI / (p I^{(p-1)/p}) ≤ ΔI / (p I_lo^{(p-1)/p}).
  const QuadratureResult head = integrate_adaptive(integrand, {0.0, knee}, 1e-3 * knee, 200);
  const double lower = std::max(head.value - head.abs_error_estimate, 1e-300);
  const double to_integral = pd * std::pow(lower, (pd - 1.0) / pd);
  const double budget = tol * to_integral;

  const double k = pd * (two_n - 1.0) - 1.0;
  const double cutoff = std::max(2.0 * knee, std::pow(std::pow(e, pd) / (k * 0.1 * budget), 1.0 / k));
  const double tail = std::pow(e, pd) * std::pow(cutoff, -k) / k;

  std::vector<double> breaks = {0.0, knee};
  while (breaks.back() < cutoff) breaks.push_back(std::min(cutoff, 2.0 * breaks.back()));

  QuadratureResult body = integrate_adaptive(integrand, breaks, 0.9 * budget);
  const double value = std::pow(body.value, 1.0 / pd);
  const double norm_error = (body.abs_error_estimate + tail) / (pd * std::pow(body.value, (pd - 1.0) / pd));
  return {value, norm_error, body.subdivisions, body.converged && norm_error <= tol};
}

}  // namespace gem::verify
