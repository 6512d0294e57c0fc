// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Scalar definitions of the GEM family (GEM, E-GEM, SE-GEM), their
// derivatives, and the ReLU / SiLU / GELU baselines.
//
// Every function is a template over the scalar type so the same code runs in
// float, double, and the Counted<> audit type. GEM is E-GEM with ε = 1 and
// shares its code path, which makes the two bit-identical at ε = 1.
//
// Overflow policy: x^{2N} is formed by repeated squaring on x². When
// (2N+1)·log2|x| would leave the exponent budget (1000 in double, 120 in
// single) the reciprocal power s = x^{-2N} is used instead, through the
// identity x^{2N+1}/(ε + x^{2N}) = x - εx/(ε + x^{2N}).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "gem/core/counting.hpp"
#include "gem/core/power.hpp"
#include "gem/core/types.hpp"

namespace gem {

namespace detail {

// True when x^{2N+1} could leave the exponent budget of the scalar type.
// Decided on the exponent bits, so it costs no floating-point operation.
template <class T>
bool exceeds_numerator_range(T x, SmoothnessOrder n) {
  using R = raw_type_t<T>;
  return binary_exponent(raw(x)) >= numerator_exponent_limit<R>(n);
}

// εx/(ε + x^{2N}) for |x| past the power range, via s = x^{-2N}.
template <class T>
T rational_tail_large(T x, SmoothnessOrder n, T eps) {
  const T s = pow_even(T(1) / x, n);
  return eps * (x * s) / (T(1) + eps * s);
}

template <class T>
T rational_forward(T x, SmoothnessOrder n, T eps) {
  if (x <= T(0)) return T(0);
  if (exceeds_numerator_range(x, n)) return x - rational_tail_large(x, n, eps);
  const T t = pow_even(x, n);
  return x * (t / (eps + t));
}

template <class T>
T rational_gate(T x, SmoothnessOrder n, T eps) {
  if (x <= T(0)) return T(0);
  const T t = pow_even(x, n);
  // Past the midpoint the complement ε/(ε + t) is small and accurate; t may
  // be +inf here, which yields exactly 1.
  if (t > eps) return T(1) - eps / (eps + t);
  return t / (eps + t);
}

template <class T>
T rational_grad(T x, SmoothnessOrder n, T eps) {
  if (x <= T(0)) return T(0);
  const T two_n = T(static_cast<raw_type_t<T>>(n.two_n()));
  const T t = pow_even(x, n);
  if (t > eps) {
    // t(t + (2N+1)ε)/(ε + t)² = 1 + r((2N-1) - 2N r), r = ε/(ε + t).
    const T r = eps / (eps + t);
    return T(1) + r * ((two_n - T(1)) - two_n * r);
  }
  // t(t + (2N+1)ε)/(ε + t)² = σ(1 + 2N r) with σ = t/(ε + t), r = ε/(ε + t).
  const T d = eps + t;
  return (t / d) * (T(1) + two_n * (eps / d));
}

template <class T>
T rational_second(T x, SmoothnessOrder n, T eps) {
  if (x <= T(0)) return T(0);
  const T two_n = T(static_cast<raw_type_t<T>>(n.two_n()));
  const T t = pow_even(x, n);
  if (t > eps) {
    // 2N x^{2N-1} ε((2N+1)ε - (2N-1)t)/(ε + t)³ rewritten through r = ε/(ε+t).
    const T r = eps / (eps + t);
    return (two_n / x) * (T(1) - r) * r * (T(2) * two_n * r - (two_n - T(1)));
  }
  const T d = eps + t;
  return two_n * (t / x) * eps * ((two_n + T(1)) * eps - (two_n - T(1)) * t) / (d * d * d);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GEM: β_N(x) = max(0, x^{2N+1}/(1 + x^{2N}))

template <class T>
T gem_forward(T x, SmoothnessOrder n) {
  return detail::rational_forward(x, n, T(1));
}

/// Log-logistic gate σ_N(x) = x^{2N}/(1 + x^{2N}) for x > 0, 0 otherwise.
/// Equals β_N(x)/x, with the removable singularity at 0 filled by 0.
template <class T>
T gem_gate(T x, SmoothnessOrder n) {
  return detail::rational_gate(x, n, T(1));
}

template <class T>
T gem_grad(T x, SmoothnessOrder n) {
  return detail::rational_grad(x, n, T(1));
}

/// β'_N from the cached gate g = β_N(x)/x: (2N+1)g - 2N g², evaluated as
/// g(1 + 2N(1 - g)) so that 1 - g is exact near g = 1.
template <class T>
T gem_grad_from_gate(T g, SmoothnessOrder n) {
  const T two_n = T(static_cast<raw_type_t<T>>(n.two_n()));
  return g * (T(1) + two_n * (T(1) - g));
}

template <class T>
T gem_second(T x, SmoothnessOrder n) {
  return detail::rational_second(x, n, T(1));
}

/// β''_N from x and its gate: (2N/x) g (1 - g)((2N+1) - 4N g). Requires x > 0.
template <class T>
T gem_second_from_gate(T x, T g, SmoothnessOrder n) {
  if (!(raw(x) > 0)) {
    throw std::domain_error("gem_second_from_gate divides by x and needs x > 0");
  }
  const T two_n = T(static_cast<raw_type_t<T>>(n.two_n()));
  return (two_n / x) * g * (T(1) - g) * ((two_n + T(1)) - T(2) * two_n * g);
}

// ---------------------------------------------------------------------------
// E-GEM: max(0, x^{2N+1}/(ε + x^{2N}))

template <class T>
T egem_forward(T x, SmoothnessOrder n, Epsilon eps) {
  return detail::rational_forward(x, n, T(static_cast<raw_type_t<T>>(eps.value())));
}

/// E-GEM gate x^{2N}/(ε + x^{2N}) for x > 0, 0 otherwise.
template <class T>
T egem_gate(T x, SmoothnessOrder n, Epsilon eps) {
  return detail::rational_gate(x, n, T(static_cast<raw_type_t<T>>(eps.value())));
}

template <class T>
T egem_grad(T x, SmoothnessOrder n, Epsilon eps) {
  return detail::rational_grad(x, n, T(static_cast<raw_type_t<T>>(eps.value())));
}

template <class T>
T egem_second(T x, SmoothnessOrder n, Epsilon eps) {
  return detail::rational_second(x, n, T(static_cast<raw_type_t<T>>(eps.value())));
}

/// E-GEM gradient from its cached gate; same polynomial in g as GEM.
template <class T>
T egem_grad_from_gate(T g, SmoothnessOrder n) {
  return gem_grad_from_gate(g, n);
}

/// Unclipped ratio x^{2N+1}/(ε + x^{2N}); an odd function of x.
template <class T>
T egem_ratio_unclipped(T x, SmoothnessOrder n, Epsilon eps) {
  const T e = T(static_cast<raw_type_t<T>>(eps.value()));
  if (detail::exceeds_numerator_range(x, n)) return x - detail::rational_tail_large(x, n, e);
  const T t = pow_even(x, n);
  return x * (t / (e + t));
}

// ---------------------------------------------------------------------------
// SE-GEM: x for x ≥ 0, εx/(ε + x^{2N}) for x < 0

template <class T>
T segem_forward(T x, SmoothnessOrder n, Epsilon eps) {
  if (x >= T(0)) return x;
  const T e = T(static_cast<raw_type_t<T>>(eps.value()));
  if (detail::exceeds_numerator_range(x, n)) return detail::rational_tail_large(x, n, e);
  const T t = pow_even(x, n);
  return e * x / (e + t);
}

/// SE-GEM self-gate r with segem_forward(x) = x·r: ε/(ε + x^{2N}) for
/// x < 0 and 1 for x ≥ 0. Values lie in (0, 1].
template <class T>
T segem_gate(T x, SmoothnessOrder n, Epsilon eps) {
  if (x >= T(0)) return T(1);
  const T e = T(static_cast<raw_type_t<T>>(eps.value()));
  const T t = pow_even(x, n);
  return e / (e + t);
}

template <class T>
T segem_grad(T x, SmoothnessOrder n, Epsilon eps) {
  if (x >= T(0)) return T(1);
  const T e = T(static_cast<raw_type_t<T>>(eps.value()));
  const T two_n = T(static_cast<raw_type_t<T>>(n.two_n()));
  if (detail::exceeds_numerator_range(x, n)) {
    const T s = pow_even(T(1) / x, n);
    const T d = T(1) + e * s;
    return (e * s / d) * ((e * s + (T(1) - two_n)) / d);
  }
  const T t = pow_even(x, n);
  const T d = e + t;
  // ε(ε + (1-2N)t)/(ε + t)², split into two quotients to keep d² in range.
  return (e / d) * ((e + (T(1) - two_n) * t) / d);
}

/// SE-GEM gradient from its cached gate r: r(1 - 2N(1 - r)). r = 1 on the
/// identity branch gives exactly 1.
template <class T>
T segem_grad_from_gate(T r, SmoothnessOrder n) {
  const T two_n = T(static_cast<raw_type_t<T>>(n.two_n()));
  return r * (T(1) - two_n * (T(1) - r));
}

template <class T>
T segem_second(T x, SmoothnessOrder n, Epsilon eps) {
  if (x >= T(0)) return T(0);
  const T e = T(static_cast<raw_type_t<T>>(eps.value()));
  const T two_n = T(static_cast<raw_type_t<T>>(n.two_n()));
  if (detail::exceeds_numerator_range(x, n)) {
    const T s = pow_even(T(1) / x, n);
    const T d = T(1) + e * s;
    return two_n * e * s * ((two_n - T(1)) - (two_n + T(1)) * e * s) / (x * d * d * d);
  }
  // 2N ε x^{2N-1} ((2N-1)t - (2N+1)ε)/(ε + t)³
  const T t = pow_even(x, n);
  const T d = e + t;
  const T num = (two_n - T(1)) * t - (two_n + T(1)) * e;
  return e * num / (d * d) * (two_n * (t / x) / d);
}

// ---------------------------------------------------------------------------
// Baselines

namespace constants {
inline constexpr double kSqrt2OverPi = 0.7978845608028654;
inline constexpr double kGeluTanhCubic = 0.044715;
inline constexpr double kInvSqrt2 = 0.7071067811865476;
inline constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace constants

/// Name of the error-function implementation the GELU baselines use.
inline constexpr const char* kErfSource = "libm erfc";

template <class T>
T relu(T x) {
  return x > T(0) ? x : T(0);
}

template <class T>
T relu_grad(T x) {
  return x > T(0) ? T(1) : T(0);
}

template <class T>
T logistic(T x) {
  using std::exp;
  return T(1) / (T(1) + exp(-x));
}

template <class T>
T silu(T x) {
  using std::exp;
  return x / (T(1) + exp(-x));
}

template <class T>
T silu_grad(T x) {
  const T s = logistic(x);
  return s * (T(1) + x * (T(1) - s));
}

template <class T>
T silu_second(T x) {
  const T s = logistic(x);
  return s * (T(1) - s) * (T(2) + x * (T(1) - T(2) * s));
}

template <class T>
T gaussian_cdf(T x) {
  using std::erfc;
  using R = raw_type_t<T>;
  return T(R(0.5)) * erfc(-x * T(R(constants::kInvSqrt2)));
}

template <class T>
T gaussian_pdf(T x) {
  using std::exp;
  using R = raw_type_t<T>;
  return T(R(constants::kInvSqrt2Pi)) * exp(T(R(-0.5)) * x * x);
}

template <class T>
T gelu_exact(T x) {
  return x * gaussian_cdf(x);
}

template <class T>
T gelu_exact_grad(T x) {
  return gaussian_cdf(x) + x * gaussian_pdf(x);
}

template <class T>
T gelu_exact_second(T x) {
  return gaussian_pdf(x) * (T(2) - x * x);
}

template <class T>
T gelu_tanh(T x) {
  using std::tanh;
  using R = raw_type_t<T>;
  const T k = T(R(constants::kSqrt2OverPi));
  const T a = T(R(constants::kGeluTanhCubic));
  return T(R(0.5)) * x * (T(1) + tanh(k * (x + a * x * x * x)));
}

template <class T>
T gelu_tanh_grad(T x) {
  using std::tanh;
  using R = raw_type_t<T>;
  const T k = T(R(constants::kSqrt2OverPi));
  const T a = T(R(constants::kGeluTanhCubic));
  const T x2 = x * x;
  const T th = tanh(k * (x + a * x2 * x));
  const T du = k * (T(1) + T(3) * a * x2);
  return T(R(0.5)) * (T(1) + th) + T(R(0.5)) * x * (T(1) - th * th) * du;
}

template <class T>
T gelu_tanh_second(T x) {
  using std::tanh;
  using R = raw_type_t<T>;
  const T k = T(R(constants::kSqrt2OverPi));
  const T a = T(R(constants::kGeluTanhCubic));
  const T x2 = x * x;
  const T th = tanh(k * (x + a * x2 * x));
  const T du = k * (T(1) + T(3) * a * x2);
  const T ddu = T(6) * k * a * x;
  return (T(1) - th * th) * (du + T(R(0.5)) * x * (ddu - T(2) * th * du * du));
}

// ---------------------------------------------------------------------------
// Dispatch over ActivationSpec

template <class T>
T baseline(T x, const ActivationSpec& spec) {
  return std::visit(
      [x](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Relu>) return relu(x);
        else if constexpr (std::is_same_v<S, Silu>) return silu(x);
        else if constexpr (std::is_same_v<S, GeluExact>) return gelu_exact(x);
        else if constexpr (std::is_same_v<S, GeluTanh>) return gelu_tanh(x);
        else throw std::invalid_argument("baseline() accepts only relu, silu, gelu, gelu_tanh");
      },
      spec);
}

template <class T>
T baseline_grad(T x, const ActivationSpec& spec) {
  return std::visit(
      [x](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Relu>) return relu_grad(x);
        else if constexpr (std::is_same_v<S, Silu>) return silu_grad(x);
        else if constexpr (std::is_same_v<S, GeluExact>) return gelu_exact_grad(x);
        else if constexpr (std::is_same_v<S, GeluTanh>) return gelu_tanh_grad(x);
        else throw std::invalid_argument("baseline_grad() accepts only relu, silu, gelu, gelu_tanh");
      },
      spec);
}

template <class T>
T activate(T x, const ActivationSpec& spec) {
  return std::visit(
      [x](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Gem>) return gem_forward(x, s.n);
        else if constexpr (std::is_same_v<S, EGem>) return egem_forward(x, s.n, s.eps);
        else if constexpr (std::is_same_v<S, SEGem>) return segem_forward(x, s.n, s.eps);
        else return baseline(x, ActivationSpec{s});
      },
      spec);
}

template <class T>
T activate_grad(T x, const ActivationSpec& spec) {
  return std::visit(
      [x](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Gem>) return gem_grad(x, s.n);
        else if constexpr (std::is_same_v<S, EGem>) return egem_grad(x, s.n, s.eps);
        else if constexpr (std::is_same_v<S, SEGem>) return segem_grad(x, s.n, s.eps);
        else return baseline_grad(x, ActivationSpec{s});
      },
      spec);
}

template <class T>
T activate_second(T x, const ActivationSpec& spec) {
  return std::visit(
      [x](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Gem>) return gem_second(x, s.n);
        else if constexpr (std::is_same_v<S, EGem>) return egem_second(x, s.n, s.eps);
        else if constexpr (std::is_same_v<S, SEGem>) return segem_second(x, s.n, s.eps);
        else if constexpr (std::is_same_v<S, Relu>) return T(0);
        else if constexpr (std::is_same_v<S, Silu>) return silu_second(x);
        else if constexpr (std::is_same_v<S, GeluExact>) return gelu_exact_second(x);
        else return gelu_tanh_second(x);
      },
      spec);
}

/// Self-gate of a GEM-family spec (the value a GateCache stores).
template <class T>
T activate_gate(T x, const ActivationSpec& spec) {
  return std::visit(
      [x](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Gem>) return gem_gate(x, s.n);
        else if constexpr (std::is_same_v<S, EGem>) return egem_gate(x, s.n, s.eps);
        else if constexpr (std::is_same_v<S, SEGem>) return segem_gate(x, s.n, s.eps);
        else throw std::invalid_argument("baseline activations have no rational gate");
      },
      spec);
}

/// Local derivative reconstructed from a cached gate (GEM family only).
template <class T>
T grad_from_gate(T g, const ActivationSpec& spec) {
  return std::visit(
      [g](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Gem>) return gem_grad_from_gate(g, s.n);
        else if constexpr (std::is_same_v<S, EGem>) return egem_grad_from_gate(g, s.n);
        else if constexpr (std::is_same_v<S, SEGem>) return segem_grad_from_gate(g, s.n);
        else throw std::invalid_argument("baseline activations have no rational gate");
      },
      spec);
}

}  // namespace gem
