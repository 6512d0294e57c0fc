// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gem/core/spec_format.hpp"
#include "gem/csv.hpp"
#include "gem/kernels/audit.hpp"
#include "gem/kernels/kernels.hpp"
#include "gem/random.hpp"

namespace gem {

struct BenchReport {
  ActivationSpec spec;
  std::uint64_t elements = 0;
  std::uint64_t iterations = 0;
  Precision precision = Precision::Double;
  double median_ns_per_pass = 0;
  double throughput_gelem_per_s = 0;
  double effective_gb_per_s = 0;
  OpCount opcount;
};

struct BenchOptions {
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;
  std::size_t threads = 1;
  std::size_t warmup_passes = 2;
  /// Timed passes are max(iterations, min_timed_passes).
  std::size_t min_timed_passes = 5;
};

namespace detail {

template <class T>
BenchReport bench_typed(const ActivationSpec& spec, std::uint64_t elements, std::uint64_t iterations,
                        const BenchOptions& options) {
  Rng rng(options.seed);
  std::vector<T> input(elements);
  for (auto& v : input) v = static_cast<T>(rng.normal());
  std::vector<T> output(elements);

  for (std::size_t i = 0; i < options.warmup_passes; ++i) {
    apply_forward_into<T>(input, output, spec, {}, options.threads);
  }
  const std::size_t passes = std::max<std::size_t>(iterations, options.min_timed_passes);
  std::vector<double> ns(passes);
  for (auto& sample : ns) {
    const auto t0 = std::chrono::steady_clock::now();
    apply_forward_into<T>(input, output, spec, {}, options.threads);
    const auto t1 = std::chrono::steady_clock::now();
    sample = std::chrono::duration<double, std::nano>(t1 - t0).count();
  }
  std::sort(ns.begin(), ns.end());
  const double median = passes % 2 == 1 ? ns[passes / 2] : 0.5 * (ns[passes / 2 - 1] + ns[passes / 2]);
  const double pass_ns = std::max(median, 1.0);

  BenchReport r{spec, elements, iterations, precision_of<T>(), median, 0, 0, audit_ops(spec)};
  r.throughput_gelem_per_s = static_cast<double>(elements) / pass_ns;
  r.effective_gb_per_s = 2.0 * static_cast<double>(elements) * sizeof(T) / pass_ns;
  return r;
}

}  // namespace detail

/// Times apply_forward over a fixed standard-normal buffer and reports the
/// median pass. Buffer allocation and filling happen before timing.
inline BenchReport bench(const ActivationSpec& spec, std::uint64_t elements, std::uint64_t iterations,
                         Precision precision, const BenchOptions& options = {}) {
  if (elements < 1) throw std::invalid_argument("bench needs at least one element");
  if (iterations < 3) throw std::invalid_argument("bench needs at least 3 iterations");
  if (const auto* e = std::get_if<EGem>(&spec)) e->eps.check(precision);
  if (const auto* s = std::get_if<SEGem>(&spec)) s->eps.check(precision);
  return precision == Precision::Single ? detail::bench_typed<float>(spec, elements, iterations, options)
                                        : detail::bench_typed<double>(spec, elements, iterations, options);
}

inline std::string bench_csv_header() {
  return "spec,elements,iterations,precision,median_ns,gelem_s,gb_s,mul,add,recip,cmp";
}

inline std::string to_csv_row(const BenchReport& r) {
  return csv::field(format_spec(r.spec)) + ',' + csv::number(r.elements) + ',' + csv::number(r.iterations) + ',' +
         to_string(r.precision) + ',' + csv::number(r.median_ns_per_pass) + ',' +
         csv::number(r.throughput_gelem_per_s) + ',' + csv::number(r.effective_gb_per_s) + ',' +
         csv::number(r.opcount.multiplies) + ',' + csv::number(r.opcount.adds) + ',' +
         csv::number(r.opcount.reciprocals) + ',' + csv::number(r.opcount.comparisons);
}

}  // namespace gem
