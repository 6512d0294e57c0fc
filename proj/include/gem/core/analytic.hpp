// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Closed-form results for the GEM family.

#include <cmath>
#include <stdexcept>
#include <string>

#include "gem/core/special.hpp"
#include "gem/core/types.hpp"

namespace gem {

/// Raised when the ℓ^p distance integral diverges, ie p(2N-1) ≤ 1.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// max_x β'_N(x) = (2N+1)²/(8N), attained where x^{2N} = (2N+1)/(2N-1).
inline LipschitzResult lipschitz(SmoothnessOrder n) {
  const double two_n = n.two_n();
  return LipschitzResult{
      .constant = (two_n + 1.0) * (two_n + 1.0) / (4.0 * two_n),
      .argmax = std::pow((two_n + 1.0) / (two_n - 1.0), 1.0 / two_n),
  };
}

/// Minimum of the SE-GEM negative branch εx/(ε + x^{2N}): stationary where
/// x^{2N} = ε/(2N-1), with value x·(2N-1)/(2N).
inline TroughResult segem_trough(SmoothnessOrder n, Epsilon eps) {
  const double two_n = n.two_n();
  const double scale = std::pow(eps.value() / (two_n - 1.0), 1.0 / two_n);
  return TroughResult{.argmin = -scale, .depth = -(two_n - 1.0) / two_n * scale};
}

namespace detail {
inline void check_lp_convergence(int p, SmoothnessOrder n) {
  if (p < 1) throw std::invalid_argument("p must be a natural number >= 1, got " + std::to_string(p));
  const int k = p * (n.two_n() - 1) - 1;
  if (k <= 0) {
    throw DivergenceError("l^p distance diverges for p=" + std::to_string(p) + ", N=" +
                          std::to_string(n.value()) + ": Gamma((p(2N-1)-1)/(2N)) = Gamma(" +
                          std::to_string(k) + "/" + std::to_string(n.two_n()) +
                          ") sits on a pole; the tail decays like x^-" + std::to_string(p * (n.two_n() - 1)));
  }
}
}  // namespace detail

/// ‖max(0,x) - E-GEM(x)‖_p over the real line:
///   ε^{(p+1)/(2Np)} (2N)^{-1/p} [Γ(a) Γ(b) / Γ(p)]^{1/p},
///   a = (p+1)/(2N), b = (p(2N-1) - 1)/(2N),
/// evaluated in log space.
inline double lp_distance_closed(int p, SmoothnessOrder n, Epsilon eps) {
  detail::check_lp_convergence(p, n);
  const double two_n = n.two_n();
  const double pd = p;
  const double a = (pd + 1.0) / two_n;
  const double b = (pd * (two_n - 1.0) - 1.0) / two_n;
  const double log_beta = log_gamma(a) + log_gamma(b) - log_gamma(pd);
  const double log_norm =
      (pd + 1.0) / (two_n * pd) * std::log(eps.value()) - std::log(two_n) / pd + log_beta / pd;
  return std::exp(log_norm);
}

}  // namespace gem
