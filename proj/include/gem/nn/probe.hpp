// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gem/core/types.hpp"
#include "gem/csv.hpp"
#include "gem/random.hpp"

namespace gem::nn {

struct SuppressionProbeResult {
  SmoothnessOrder n{1};
  std::size_t depth = 0;
  double mean_log_gain_per_layer = 0;
  double log_product = 0;
  std::size_t samples = 0;
};

/// log β'_N(x) for x > 0 without forming x^{2N}:
///   log β' = 2N log x + log(x^{2N} + 2N + 1) - 2 log(1 + x^{2N}),
/// with the last two terms rewritten through u = 2N log x so that both tails
/// stay finite.
inline double log_gem_gain(double x, SmoothnessOrder n) {
  const double two_n = n.two_n();
  const double u = two_n * std::log(x);
  const double c = two_n + 1.0;
  // log(e^u + c) and log(1 + e^u) via softplus-style splitting.
  const double log_t_plus_c = u > std::log(c) ? u + std::log1p(c * std::exp(-u)) : std::log(c) + std::log1p(std::exp(u) / c);
  const double log1p_t = u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  return u + log_t_plus_c - 2.0 * log1p_t;
}

/// Monte-Carlo estimate of E[log β'_N(x) | β'_N(x) > 0] for standard-normal
/// pre-activations, per layer and compounded over `depth` layers. Conditioning
/// on β' > 0 is conditioning on x > 0, so each draw uses |z|. Every layer gets
/// its own `samples` draws; log_product sums the per-layer means.
inline SuppressionProbeResult suppression_probe(SmoothnessOrder n, std::size_t depth, std::size_t samples,
                                                std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("suppression_probe needs at least 1000 samples");
  if (depth < 1) throw std::invalid_argument("suppression_probe needs depth >= 1");
  Rng rng(seed);
  double log_product = 0;
  for (std::size_t layer = 0; layer < depth; ++layer) {
    double sum = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      double x = std::abs(rng.normal());
      while (x == 0.0) x = std::abs(rng.normal());
      sum += log_gem_gain(x, n);
    }
    log_product += sum / static_cast<double>(samples);
  }
  return {n, depth, log_product / static_cast<double>(depth), log_product, samples};
}

inline std::string probe_csv_header() { return "n,depth,samples,mean_log_gain_per_layer,log_product"; }

inline std::string to_csv_row(const SuppressionProbeResult& r) {
  return std::to_string(r.n.value()) + ',' + std::to_string(r.depth) + ',' + std::to_string(r.samples) + ',' +
         csv::number(r.mean_log_gain_per_layer) + ',' + csv::number(r.log_product);
}

}  // namespace gem::nn
