// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Operation audits. Counts come from running the production scalar code with
// Counted<double>, never from a hand-written table.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <variant>

#include "gem/core/activations.hpp"
#include "gem/core/counting.hpp"
#include "gem/core/power.hpp"

namespace gem {

struct PowEvenAudit {
  double value;
  std::uint64_t multiplies;
};

inline PowEvenAudit pow_even_audited(double x, SmoothnessOrder n) {
  OpTally tally;
  const Counted<double> v = pow_even(Counted<double>(x), n);
  return {v.value(), tally.count().multiplies};
}

namespace detail {

// Probes cover both sides of every branch in the forward paths.
inline constexpr std::array<double, 6> kAuditProbes = {-1.5, -0.75, 0.0, 0.75, 1.5, 3.0};

template <class Fn>
OpCount worst_case_count(Fn&& fn) {
  OpCount worst{};
  std::uint64_t worst_transcendentals = 0;
  for (double x : kAuditProbes) {
    OpTally tally;
    fn(Counted<double>(x));
    const OpCount& c = tally.count();
    if (c.total() > worst.total()) worst = c;
    worst_transcendentals = std::max(worst_transcendentals, c.transcendentals);
  }
  worst.transcendentals = worst_transcendentals;
  return worst;
}

}  // namespace detail

/// Per-element operations of the forward path: the most expensive branch
/// over a set of probe inputs.
inline OpCount audit_ops(const ActivationSpec& spec) {
  return detail::worst_case_count([&](Counted<double> x) { (void)activate(x, spec); });
}

/// Per-element operations of the cached backward, including the final
/// multiply by the upstream gradient. GEM family only.
inline OpCount audit_backward_cached(const ActivationSpec& spec) {
  OpCount worst{};
  for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    OpTally tally;
    (void)(Counted<double>(1.0) * grad_from_gate(Counted<double>(g), spec));
    if (tally.count().total() > worst.total()) worst = tally.count();
  }
  return worst;
}

/// Forward count quoted for GEM and E-GEM: 5 + floor(log2 N). None for other
/// activations.
inline std::optional<std::uint64_t> claimed_forward_ops(const ActivationSpec& spec) {
  if (!std::holds_alternative<Gem>(spec) && !std::holds_alternative<EGem>(spec)) return std::nullopt;
  const auto n = static_cast<unsigned>(order_of(spec).value());
  return 5U + static_cast<std::uint64_t>(std::bit_width(n) - 1);
}

struct AuditReport {
  OpCount forward;
  std::optional<std::uint64_t> claimed_total;
  bool diverges_from_claim = false;
};

inline AuditReport audit_report(const ActivationSpec& spec) {
  AuditReport report{audit_ops(spec), claimed_forward_ops(spec), false};
  report.diverges_from_claim = report.claimed_total && *report.claimed_total != report.forward.total();
  return report;
}

}  // namespace gem
