// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "gem/core/activations.hpp"
#include "gem/core/power.hpp"
#include "gem/core/types.hpp"

namespace gem {

/// Per-element gates saved by the forward pass. For GEM and E-GEM each entry
/// is x^{2N}/(ε + x^{2N}) when x > 0 and 0 otherwise. For SE-GEM each entry is
/// ε/(ε + x^{2N}) when x < 0 and 1 otherwise.
template <class T>
struct GateCache {
  std::vector<T> gates;
  ActivationSpec spec;
};

template <class T>
struct ForwardResult {
  std::vector<T> output;
  std::optional<GateCache<T>> cache;
  /// Set when a cache was requested for a spec that has no rational gate.
  bool cache_unavailable = false;
};

namespace detail {

inline constexpr std::size_t kBlock = 256;
inline constexpr std::size_t kMinParallelElements = std::size_t{1} << 16;

template <class Fn>
void parallel_chunks(std::size_t length, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || length < kMinParallelElements) {
    fn(std::size_t{0}, length);
    return;
  }
  const std::size_t blocks = (length + kBlock - 1) / kBlock;
  const std::size_t workers = std::min(threads, blocks);
  const std::size_t per_worker = (blocks + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(length, w * per_worker * kBlock);
    const std::size_t end = std::min(length, (w + 1) * per_worker * kBlock);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

// x^{2N} for a block, with the squaring steps as the outer loop so the inner
// loops vectorize. Same operation order as pow_even.
template <class T>
void pow_even_block(const T* __restrict x, T* __restrict t, T* __restrict base, std::size_t m, SmoothnessOrder n) {
  for (std::size_t j = 0; j < m; ++j) base[j] = x[j] * x[j];
  for (std::size_t j = 0; j < m; ++j) t[j] = base[j];
  const unsigned e = static_cast<unsigned>(n.value());
  for (int bit = std::bit_width(e) - 2; bit >= 0; --bit) {
    for (std::size_t j = 0; j < m; ++j) t[j] = t[j] * t[j];
    if ((e >> bit) & 1U) {
      for (std::size_t j = 0; j < m; ++j) t[j] = t[j] * base[j];
    }
  }
}

template <class T>
struct FloatBits;
template <>
struct FloatBits<double> {
  using U = std::uint64_t;
  static constexpr int kMantissa = 52;
  static constexpr int kBias = 1023;
  static constexpr U kExponentMask = 0x7ff0000000000000ULL;
};
template <>
struct FloatBits<float> {
  using U = std::uint32_t;
  static constexpr int kMantissa = 23;
  static constexpr int kBias = 127;
  static constexpr U kExponentMask = 0x7f800000U;
};

// True when some element has binary_exponent(x) >= limit. Adding
// 2^{top} - threshold to the exponent field sets the top bit exactly for the
// offending elements, and OR-ing never sets it otherwise, so the scan is a
// branch-free integer reduction.
template <class T>
bool any_at_or_above_exponent(const T* __restrict x, std::size_t m, int limit) {
  using B = FloatBits<T>;
  using U = typename B::U;
  constexpr U top = U{1} << (sizeof(U) * 8 - 1);
  const U threshold = static_cast<U>(std::clamp(limit + B::kBias, 0, 2 * B::kBias + 1)) << B::kMantissa;
  const U offset = top - threshold;
  U acc = 0;
  for (std::size_t j = 0; j < m; ++j) acc |= (std::bit_cast<U>(x[j]) & B::kExponentMask) + offset;
  return (acc & top) != 0;
}

template <class T>
void rational_forward_range(const T* __restrict x, T* __restrict y, T* __restrict g, std::size_t len,
                            SmoothnessOrder n, T eps) {
  alignas(64) T t[kBlock];
  alignas(64) T base[kBlock];
  const int limit = numerator_exponent_limit<T>(n);
  for (std::size_t start = 0; start < len; start += kBlock) {
    const std::size_t m = std::min(kBlock, len - start);
    const T* __restrict xb = x + start;
    T* __restrict yb = y + start;
    pow_even_block(xb, t, base, m, n);
    for (std::size_t j = 0; j < m; ++j) {
      const T v = xb[j] * (t[j] / (eps + t[j]));
      yb[j] = xb[j] > T(0) ? v : T(0);
    }
    if (g != nullptr) {
      T* __restrict gb = g + start;
      for (std::size_t j = 0; j < m; ++j) {
        const T hi = T(1) - eps / (eps + t[j]);
        const T lo = t[j] / (eps + t[j]);
        const T v = t[j] > eps ? hi : lo;
        gb[j] = xb[j] > T(0) ? v : T(0);
      }
    }
    if (any_at_or_above_exponent(xb, m, limit)) {
      for (std::size_t j = 0; j < m; ++j) {
        if (binary_exponent(xb[j]) >= limit) yb[j] = rational_forward(xb[j], n, eps);
      }
    }
  }
}

template <class T>
void segem_forward_range(const T* __restrict x, T* __restrict y, T* __restrict g, std::size_t len,
                         SmoothnessOrder n, Epsilon eps) {
  alignas(64) T t[kBlock];
  alignas(64) T base[kBlock];
  const T e = static_cast<T>(eps.value());
  const int limit = numerator_exponent_limit<T>(n);
  for (std::size_t start = 0; start < len; start += kBlock) {
    const std::size_t m = std::min(kBlock, len - start);
    const T* __restrict xb = x + start;
    T* __restrict yb = y + start;
    pow_even_block(xb, t, base, m, n);
    for (std::size_t j = 0; j < m; ++j) {
      const T v = e * xb[j] / (e + t[j]);
      yb[j] = xb[j] >= T(0) ? xb[j] : v;
    }
    if (g != nullptr) {
      T* __restrict gb = g + start;
      for (std::size_t j = 0; j < m; ++j) {
        const T r = e / (e + t[j]);
        gb[j] = xb[j] >= T(0) ? T(1) : r;
      }
    }
    if (any_at_or_above_exponent(xb, m, limit)) {
      for (std::size_t j = 0; j < m; ++j) {
        if (binary_exponent(xb[j]) >= limit && !(xb[j] >= T(0))) yb[j] = segem_forward(xb[j], n, eps);
      }
    }
  }
}

template <class T>
void forward_range(const T* x, T* y, T* g, std::size_t len, const ActivationSpec& spec) {
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Gem>) {
          rational_forward_range(x, y, g, len, s.n, T(1));
        } else if constexpr (std::is_same_v<S, EGem>) {
          rational_forward_range(x, y, g, len, s.n, static_cast<T>(s.eps.value()));
        } else if constexpr (std::is_same_v<S, SEGem>) {
          segem_forward_range(x, y, g, len, s.n, s.eps);
        } else if constexpr (std::is_same_v<S, Relu>) {
          for (std::size_t i = 0; i < len; ++i) y[i] = relu(x[i]);
        } else if constexpr (std::is_same_v<S, Silu>) {
          for (std::size_t i = 0; i < len; ++i) y[i] = silu(x[i]);
        } else if constexpr (std::is_same_v<S, GeluExact>) {
          for (std::size_t i = 0; i < len; ++i) y[i] = gelu_exact(x[i]);
        } else {
          for (std::size_t i = 0; i < len; ++i) y[i] = gelu_tanh(x[i]);
        }
      },
      spec);
}

inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace detail

/// Writes activation(input) into output and, when gates is non-empty, the
/// gate of every element into gates. Results are bit-identical to calling
/// the scalar functions in core/ and do not depend on the thread count.
template <class T>
void apply_forward_into(std::span<const T> input, std::span<T> output, const ActivationSpec& spec,
                        std::span<T> gates = {}, std::size_t threads = 1) {
  detail::require_same_length(input.size(), output.size(), "apply_forward_into");
  if (!gates.empty()) {
    detail::require_same_length(input.size(), gates.size(), "apply_forward_into gates");
    if (!is_gem_family(spec)) throw std::invalid_argument("baseline activations have no rational gate");
  }
  detail::parallel_chunks(input.size(), threads, [&](std::size_t begin, std::size_t end) {
    detail::forward_range(input.data() + begin, output.data() + begin,
                          gates.empty() ? nullptr : gates.data() + begin, end - begin, spec);
  });
}

template <class T>
ForwardResult<T> apply_forward(std::span<const T> input, const ActivationSpec& spec, bool want_cache,
                               std::size_t threads = 1) {
  ForwardResult<T> result;
  result.output.resize(input.size());
  if (want_cache && is_gem_family(spec)) {
    GateCache<T> cache{std::vector<T>(input.size()), spec};
    apply_forward_into<T>(input, result.output, spec, cache.gates, threads);
    result.cache = std::move(cache);
  } else {
    result.cache_unavailable = want_cache;
    apply_forward_into<T>(input, result.output, spec, {}, threads);
  }
  return result;
}

/// grad_in = grad_out · φ'(x) with φ' rebuilt from the cached gate only.
template <class T>
std::vector<T> apply_backward(std::span<const T> grad_out, const GateCache<T>& cache, const ActivationSpec& spec,
                              std::size_t threads = 1) {
  if (!is_gem_family(spec)) throw std::invalid_argument("apply_backward needs a GEM-family spec");
  if (!(cache.spec == spec)) throw std::invalid_argument("gate cache was produced for a different spec");
  detail::require_same_length(grad_out.size(), cache.gates.size(), "apply_backward");
  std::vector<T> grad_in(grad_out.size());
  const T* go = grad_out.data();
  const T* g = cache.gates.data();
  T* gi = grad_in.data();
  const SmoothnessOrder n = order_of(spec);
  const bool self_gated = std::holds_alternative<SEGem>(spec);
  detail::parallel_chunks(grad_out.size(), threads, [&](std::size_t begin, std::size_t end) {
    if (self_gated) {
      for (std::size_t i = begin; i < end; ++i) gi[i] = go[i] * segem_grad_from_gate(g[i], n);
    } else {
      for (std::size_t i = begin; i < end; ++i) gi[i] = go[i] * gem_grad_from_gate(g[i], n);
    }
  });
  return grad_in;
}

/// grad_in = grad_out · φ'(x) with φ' evaluated from the saved input.
template <class T>
std::vector<T> apply_backward_direct(std::span<const T> grad_out, std::span<const T> saved_input,
                                     const ActivationSpec& spec, std::size_t threads = 1) {
  detail::require_same_length(grad_out.size(), saved_input.size(), "apply_backward_direct");
  std::vector<T> grad_in(grad_out.size());
  detail::parallel_chunks(grad_out.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) grad_in[i] = grad_out[i] * activate_grad(saved_input[i], spec);
  });
  return grad_in;
}

}  // namespace gem
