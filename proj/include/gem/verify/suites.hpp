// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gem/core/activations.hpp"
#include "gem/core/analytic.hpp"
#include "gem/csv.hpp"
#include "gem/verify/finite_diff.hpp"
#include "gem/verify/optimize.hpp"
#include "gem/verify/quadrature.hpp"
#include "gem/verify/report.hpp"

namespace gem::verify {

inline constexpr std::array<int, 5> kGridOrders = {1, 2, 3, 5, 9};
inline constexpr std::array<double, 3> kGridEpsilons = {1e-2, 1.0, 10.0};

inline std::vector<double> gradient_grid() {
  const double r3 = std::sqrt(3.0);
  return {-5.0, -r3, -1.0, -0.1, -0.01, 0.01, 0.1, 1.0, r3, 5.0};
}

/// Step for derivative checks at x: a thousandth of |x|, inside the allowed
/// step range.
inline double step_for(double x) { return std::clamp(1e-3 * std::abs(x), 1e-6, 1e-1); }

namespace detail {

inline std::string fmt_inputs(std::string_view name, double x, int n, double eps = -1) {
  std::string s = std::string(name) + " x=" + csv::number(x) + " N=" + std::to_string(n);
  if (eps > 0) s += " eps=" + csv::number(eps);
  return s;
}

template <class Fwd, class Deriv>
CheckRow derivative_check(std::string id, std::string inputs, const Fwd& fwd, const Deriv& deriv, double x,
                          int order) {
  const FiniteDiffConfig cfg{order, step_for(x), 3};
  const double fd = finite_diff(fwd, x, cfg);
  const double exact = deriv(x);
  // Relative to the larger of the derivative and the function's own scale
  // |f(x)|/|x|^order, so that derivatives crossing zero are judged fairly.
  const double scale = std::max(std::abs(exact), std::abs(fwd(x)) / std::pow(std::abs(x), order));
  return make_check(std::move(id), std::move(inputs), exact, fd, 0.0, 1e-6, scale);
}

}  // namespace detail

/// Derivative consistency against finite differences over the standard grid.
inline std::vector<CheckRow> gradient_consistency_checks() {
  std::vector<CheckRow> rows;
  for (int n_val : kGridOrders) {
    const SmoothnessOrder n(n_val);
    for (double x : gradient_grid()) {
      rows.push_back(detail::derivative_check(
          "gem_grad_fd", detail::fmt_inputs("gem", x, n_val), [n](double v) { return gem_forward(v, n); },
          [n](double v) { return gem_grad(v, n); }, x, 1));
      rows.push_back(detail::derivative_check(
          "gem_second_fd", detail::fmt_inputs("gem", x, n_val), [n](double v) { return gem_forward(v, n); },
          [n](double v) { return gem_second(v, n); }, x, 2));
      for (double e_val : kGridEpsilons) {
        const Epsilon e(e_val);
        rows.push_back(detail::derivative_check(
            "egem_grad_fd", detail::fmt_inputs("egem", x, n_val, e_val),
            [n, e](double v) { return egem_forward(v, n, e); }, [n, e](double v) { return egem_grad(v, n, e); }, x,
            1));
        rows.push_back(detail::derivative_check(
            "segem_grad_fd", detail::fmt_inputs("segem", x, n_val, e_val),
            [n, e](double v) { return segem_forward(v, n, e); }, [n, e](double v) { return segem_grad(v, n, e); },
            x, 1));
      }
    }
  }
  for (double x : gradient_grid()) {
    rows.push_back(detail::derivative_check("silu_grad_fd", "silu x=" + csv::number(x),
                                            [](double v) { return silu(v); }, [](double v) { return silu_grad(v); },
                                            x, 1));
    rows.push_back(detail::derivative_check(
        "gelu_grad_fd", "gelu x=" + csv::number(x), [](double v) { return gelu_exact(v); },
        [](double v) { return gelu_exact_grad(v); }, x, 1));
    rows.push_back(detail::derivative_check(
        "gelu_tanh_grad_fd", "gelu_tanh x=" + csv::number(x), [](double v) { return gelu_tanh(v); },
        [](double v) { return gelu_tanh_grad(v); }, x, 1));
    rows.push_back(detail::derivative_check("relu_grad_fd", "relu x=" + csv::number(x),
                                            [](double v) { return relu(v); }, [](double v) { return relu_grad(v); },
                                            x, 1));
  }
  return rows;
}

/// lipschitz(N) against golden-section maximization of gem_grad in log x.
inline std::vector<CheckRow> lipschitz_checks(int max_n = 9) {
  std::vector<CheckRow> rows;
  for (int n_val = 1; n_val <= max_n; ++n_val) {
    const SmoothnessOrder n(n_val);
    const auto found = maximize_unimodal([n](double u) { return gem_grad(std::exp(u), n); }, std::log(1e-3),
                                         std::log(1e3), 200);
    const LipschitzResult closed = lipschitz(n);
    const std::string in = "N=" + std::to_string(n_val);
    rows.push_back(make_check("lipschitz_constant", in, closed.constant, found.max, 1e-9, 0.0));
    rows.push_back(make_check("lipschitz_argmax", in, closed.argmax, std::exp(found.argmax), 1e-6, 0.0));
  }
  return rows;
}

/// segem_trough against golden-section minimization of segem_forward.
inline std::vector<CheckRow> trough_checks() {
  std::vector<CheckRow> rows;
  for (int n_val : {1, 2, 3}) {
    for (double e_val : {1e-2, 1.0, 10.0}) {
      const SmoothnessOrder n(n_val);
      const Epsilon e(e_val);
      const auto found =
          maximize_unimodal([n, e](double x) { return -segem_forward(x, n, e); }, -10.0 * std::max(1.0, e_val), 0.0, 200);
      const TroughResult closed = segem_trough(n, e);
      const std::string in = "N=" + std::to_string(n_val) + " eps=" + csv::number(e_val);
      rows.push_back(make_check("segem_trough_depth", in, closed.depth, -found.max, 1e-9, 0.0));
      rows.push_back(make_check("segem_trough_argmin", in, closed.argmin, found.argmax, 1e-6, 0.0));
    }
  }
  return rows;
}

inline std::vector<CheckRow> core_suite() {
  std::vector<CheckRow> rows;
  const SmoothnessOrder n1(1);
  const SmoothnessOrder n2(2);
  const Epsilon e1(1.0);
  rows.push_back(make_check("gem_forward", "x=2 N=1", 1.6, gem_forward(2.0, n1), 0, 4e-16));
  rows.push_back(make_check("gem_gate", "x=3 N=1", 0.9, gem_gate(3.0, n1), 0, 4e-16));
  rows.push_back(make_check("gem_grad", "x=sqrt3 N=1", 1.125, gem_grad(std::sqrt(3.0), n1), 0, 1e-15));
  rows.push_back(make_check("gem_grad", "x=1 N=2", 1.5, gem_grad(1.0, n2), 0, 4e-16));
  rows.push_back(make_check("gem_second", "x=1 N=1", 0.5, gem_second(1.0, n1), 0, 4e-16));
  rows.push_back(make_check("segem_forward", "x=-1 N=1 eps=1", -0.5, segem_forward(-1.0, n1, e1), 0, 4e-16));
  rows.push_back(make_check("segem_grad", "x=-2 N=1 eps=1", -0.12, segem_grad(-2.0, n1, e1), 0, 4e-16));
  rows.push_back(make_check("egem_forward", "x=1 N=1 eps=1e-4", 1.0 / 1.0001, egem_forward(1.0, n1, Epsilon(1e-4)),
                            0, 4e-16));
  for (auto& r : lipschitz_checks()) rows.push_back(std::move(r));
  for (auto& r : trough_checks()) rows.push_back(std::move(r));
  for (auto& r : gradient_consistency_checks()) rows.push_back(std::move(r));
  return rows;
}

// ---------------------------------------------------------------------------

inline std::vector<CheckRow> distances_suite() {
  std::vector<CheckRow> rows;
  for (int p : {2, 3}) {
    for (int n_val : {1, 2, 3}) {
      double previous = INFINITY;
      for (double e_val : {1.0, 1e-2, 1e-4}) {
        const SmoothnessOrder n(n_val);
        const Epsilon e(e_val);
        const double closed = lp_distance_closed(p, n, e);
        const QuadratureResult quad = lp_distance_quadrature(p, n, e, 1e-10);
        const std::string in = "p=" + std::to_string(p) + " N=" + std::to_string(n_val) + " eps=" + csv::number(e_val);
        CheckRow row = make_check("lp_closed_vs_quadrature", in, quad.value, closed, 0, 1e-4);
        row.pass = row.pass && quad.converged;
        rows.push_back(std::move(row));
        rows.push_back(make_flag("lp_decreasing_as_eps_shrinks", in, closed < previous));
        previous = closed;
      }
    }
  }
  const auto raises = [](auto&& fn) {
    try {
      fn();
    } catch (const DivergenceError&) {
      return true;
    }
    return false;
  };
  const SmoothnessOrder n1(1);
  const Epsilon e1(1.0);
  rows.push_back(make_flag("lp_divergence_closed", "p=1 N=1", raises([&] { (void)lp_distance_closed(1, n1, e1); })));
  rows.push_back(
      make_flag("lp_divergence_quadrature", "p=1 N=1", raises([&] { (void)lp_distance_quadrature(1, n1, e1); })));
  return rows;
}

// ---------------------------------------------------------------------------

/// Estimates of the k-th derivative of GEM at 0 from plain central
/// differences with steps h0, h0/2, …
inline std::vector<double> origin_derivative_sequence(SmoothnessOrder n, int order, double h0, int halvings) {
  std::vector<double> out;
  for (int i = 0; i <= halvings; ++i) {
    out.push_back(central_difference([n](double x) { return gem_forward(x, n); }, 0.0, order, h0 / std::pow(2.0, i)));
  }
  return out;
}

/// Orders 1..2N vanish at the origin: since 0 ≤ β_N(x) ≤ x^{2N+1} for x ≥ 0,
/// |δ_h^k β_N(0)|/h^k ≤ 2^k (k/2)^{2N+1} h^{2N+1-k}, which must hold at every
/// step, and the quotient must shrink at least geometrically. Order 2N+1 must settle on a
/// nonzero limit.
inline std::vector<CheckRow> vanishing_derivative_checks() {
  std::vector<CheckRow> rows;
  constexpr double kH0 = 0.1;
  constexpr int kHalvings = 12;
  for (int n_val : {1, 2, 3}) {
    const SmoothnessOrder n(n_val);
    for (int k = 1; k <= 2 * n_val + 1 && k <= 6; ++k) {
      const auto seq = origin_derivative_sequence(n, k, kH0, kHalvings);
      const std::string in = "N=" + std::to_string(n_val) + " k=" + std::to_string(k);
      if (k <= 2 * n_val) {
        bool within_bound = true;
        for (int i = 0; i <= kHalvings; ++i) {
          const double h = kH0 / std::pow(2.0, i);
          const double bound = std::pow(2.0, k) * std::pow(0.5 * k, 2 * n_val + 1) * std::pow(h, 2 * n_val + 1 - k);
          within_bound = within_bound && std::abs(seq[static_cast<std::size_t>(i)]) <= bound * (1 + 1e-12) + 1e-300;
        }
        rows.push_back(make_flag("origin_derivative_bound", in, within_bound));
        // Each halving shrinks the quotient by at least 2 since 2N+1-k ≥ 1.
        const double shrink = 2.0 * std::abs(seq.front()) / std::pow(2.0, kHalvings);
        rows.push_back(make_check("origin_derivative_vanishes", in, 0.0, seq.back(), shrink, 0.0));
      } else {
        const double a = seq[seq.size() - 2];
        const double b = seq.back();
        rows.push_back(make_check("origin_derivative_settles", in, a, b, 0.0, 1e-3));
        rows.push_back(make_flag("origin_derivative_nonzero", in, std::abs(b) > 1e-2));
      }
    }
  }
  return rows;
}

/// Orders 2N+1 > 6 are out of range for finite_diff; N = 3 order 7 uses the
/// plain central quotient directly.
inline std::vector<CheckRow> origin_order7_check() {
  const SmoothnessOrder n(3);
  const auto seq = origin_derivative_sequence(n, 7, 0.1, 12);
  std::vector<CheckRow> rows;
  rows.push_back(make_check("origin_derivative_settles", "N=3 k=7", seq[seq.size() - 2], seq.back(), 0.0, 1e-3));
  rows.push_back(make_flag("origin_derivative_nonzero", "N=3 k=7", std::abs(seq.back()) > 1e-2));
  return rows;
}

struct JunctionEstimate {
  double left;
  double right;
};

inline JunctionEstimate segem_junction_derivative(SmoothnessOrder n, Epsilon eps, int order) {
  const auto f = [n, eps](double x) { return segem_forward(x, n, eps); };
  const FiniteDiffConfig cfg{order, 0.05, 4};
  return {finite_diff_one_sided(f, 0.0, cfg, Side::Left), finite_diff_one_sided(f, 0.0, cfg, Side::Right)};
}

/// SE-GEM one-sided derivatives at 0 agree through order 2N and split at
/// order 2N+1.
inline std::vector<CheckRow> junction_checks() {
  std::vector<CheckRow> rows;
  for (int n_val : {1, 2}) {
    for (double e_val : {1.0, 2.0}) {
      const SmoothnessOrder n(n_val);
      const Epsilon e(e_val);
      for (int k = 1; k <= 2 * n_val + 1; ++k) {
        const JunctionEstimate est = segem_junction_derivative(n, e, k);
        const std::string in = "N=" + std::to_string(n_val) + " eps=" + csv::number(e_val) + " k=" + std::to_string(k);
        if (k <= 2 * n_val) {
          rows.push_back(make_check("segem_junction_match", in, est.right, est.left, 1e-4, 0.0));
        } else {
          rows.push_back(make_flag("segem_junction_split", in, std::abs(est.left - est.right) > 1.0));
        }
      }
    }
  }
  return rows;
}

inline std::vector<CheckRow> smoothness_suite() {
  std::vector<CheckRow> rows = vanishing_derivative_checks();
  for (auto& r : origin_order7_check()) rows.push_back(std::move(r));
  for (auto& r : junction_checks()) rows.push_back(std::move(r));
  return rows;
}

inline std::vector<CheckRow> run_suite(std::string_view name) {
  if (name == "core") return core_suite();
  if (name == "distances") return distances_suite();
  if (name == "smoothness") return smoothness_suite();
  if (name == "all") {
    std::vector<CheckRow> rows = core_suite();
    for (auto& r : distances_suite()) rows.push_back(std::move(r));
    for (auto& r : smoothness_suite()) rows.push_back(std::move(r));
    return rows;
  }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'; expected core|distances|smoothness|all");
}

}  // namespace gem::verify
