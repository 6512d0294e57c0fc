// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <type_traits>

#include "gem/core/counting.hpp"
#include "gem/core/types.hpp"

namespace gem {

/// x^{2N} by left-to-right square-and-multiply on the base x².
/// Uses 1 + floor(log2 N) + popcount(N) - 1 multiplies.
template <class T>
constexpr T pow_even(T x, SmoothnessOrder n) {
  const T base = x * x;
  const unsigned e = static_cast<unsigned>(n.value());
  T acc = base;
  for (int bit = std::bit_width(e) - 2; bit >= 0; --bit) {
    acc = acc * acc;
    if ((e >> bit) & 1U) acc = acc * base;
  }
  return acc;
}

/// Multiply count of pow_even, for checking audits against the closed form.
constexpr unsigned pow_even_multiplies(SmoothnessOrder n) {
  const unsigned e = static_cast<unsigned>(n.value());
  return 1U + static_cast<unsigned>(std::bit_width(e) - 1) + static_cast<unsigned>(std::popcount(e)) - 1U;
}

namespace detail {

// 2N·log2|x| beyond which x^{2N} is no longer formed directly.
template <class R>
constexpr int power_exponent_budget() {
  return std::is_same_v<R, float> ? 120 : 1000;
}

/// Unbiased binary exponent read from the bit pattern: floor(log2|v|) for
/// normal numbers, below the normal range for zero and subnormals, above it
/// for inf and NaN. Integer work only.
template <class R>
constexpr int binary_exponent(R v) {
  if constexpr (std::is_same_v<R, float>) {
    return static_cast<int>((std::bit_cast<std::uint32_t>(v) >> 23) & 0xffU) - 127;
  } else {
    return static_cast<int>((std::bit_cast<std::uint64_t>(v) >> 52) & 0x7ffU) - 1023;
  }
}

/// Smallest binary exponent e for which (2N+1)(e+1) exceeds the budget.
template <class R>
constexpr int numerator_exponent_limit(SmoothnessOrder n) {
  return power_exponent_budget<R>() / (n.two_n() + 1);
}

}  // namespace detail
}  // namespace gem
