// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reference formulas written directly from the definitions in extended
// precision. They share no code with the library.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

namespace gem::test {

inline long double ipow(long double x, int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

inline long double gem_ref(long double x, int n, long double eps = 1.0L) {
  if (x <= 0) return 0;
  return ipow(x, 2 * n + 1) / (eps + ipow(x, 2 * n));
}

inline long double gem_grad_ref(long double x, int n, long double eps = 1.0L) {
  if (x <= 0) return 0;
  const long double t = ipow(x, 2 * n);
  return t * (t + (2 * n + 1) * eps) / ((eps + t) * (eps + t));
}

inline long double gem_second_ref(long double x, int n) {
  if (x <= 0) return 0;
  const long double t = ipow(x, 2 * n);
  return 2 * n * ipow(x, 2 * n - 1) * ((2 * n + 1) - (2 * n - 1) * t) / ipow(1 + t, 3);
}

inline long double segem_ref(long double x, int n, long double eps) {
  if (x >= 0) return x;
  return eps * x / (eps + ipow(x, 2 * n));
}

inline long double segem_grad_ref(long double x, int n, long double eps) {
  if (x >= 0) return 1;
  const long double t = ipow(x, 2 * n);
  return eps * (eps + (1 - 2 * n) * t) / ((eps + t) * (eps + t));
}

/// Distance in representable doubles between a and b.
inline std::uint64_t ulp_distance(double a, double b) {
  const auto key = [](double v) {
    std::int64_t i;
    std::memcpy(&i, &v, sizeof i);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const std::int64_t ka = key(a);
  const std::int64_t kb = key(b);
  return ka > kb ? static_cast<std::uint64_t>(ka) - static_cast<std::uint64_t>(kb)
                 : static_cast<std::uint64_t>(kb) - static_cast<std::uint64_t>(ka);
}

}  // namespace gem::test
