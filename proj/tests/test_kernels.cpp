// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "gem/gem.hpp"
#include "oracles.hpp"

namespace gem {
namespace {

std::vector<ActivationSpec> all_specs() {
  std::vector<ActivationSpec> specs = {Relu{}, Silu{}, GeluExact{}, GeluTanh{}};
  for (int n : {1, 2, 3, 5, 9}) {
    specs.emplace_back(Gem{SmoothnessOrder(n)});
    for (double e : {1e-6, 1e-2, 1.0, 10.0}) {
      specs.emplace_back(EGem{SmoothnessOrder(n), Epsilon(e)});
      specs.emplace_back(SEGem{SmoothnessOrder(n), Epsilon(e)});
    }
  }
  return specs;
}

template <class T>
std::vector<T> mixed_inputs(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<T> xs(count);
  for (auto& x : xs) {
    const double u = rng.uniform01();
    if (u < 0.6) x = static_cast<T>(3 * rng.normal());
    else if (u < 0.9) x = static_cast<T>(std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.uniform(-30, 30))));
    else x = static_cast<T>(rng.uniform(-1e6, 1e6));
  }
  xs[0] = 0;
  xs[1] = T(-0.0);
  xs[2] = 1;
  xs[3] = std::numeric_limits<T>::max();
  xs[4] = -std::numeric_limits<T>::max();
  xs[5] = std::numeric_limits<T>::denorm_min();
  return xs;
}

TEST(PowEven, ValuesAndCounts) {
  auto a = pow_even_audited(2.0, SmoothnessOrder(1));
  EXPECT_EQ(a.value, 4.0);
  EXPECT_EQ(a.multiplies, 1U);
  a = pow_even_audited(2.0, SmoothnessOrder(2));
  EXPECT_EQ(a.value, 16.0);
  EXPECT_EQ(a.multiplies, 2U);
  a = pow_even_audited(3.0, SmoothnessOrder(3));
  EXPECT_EQ(a.value, 729.0);
  EXPECT_EQ(a.multiplies, 3U);
}

TEST(PowEven, CountFollowsAdditionChainBound) {
  for (int n = 1; n <= 64; ++n) {
    const auto un = static_cast<unsigned>(n);
    const auto floor_log2 = static_cast<unsigned>(std::bit_width(un) - 1);
    const auto a = pow_even_audited(1.01, SmoothnessOrder(n));
    EXPECT_EQ(a.multiplies, 1 + floor_log2 + static_cast<unsigned>(std::popcount(un)) - 1) << n;
    EXPECT_LE(a.multiplies, 1 + 2 * floor_log2);
    if (std::has_single_bit(un)) {
      EXPECT_EQ(a.multiplies, 1 + floor_log2);
    }
    EXPECT_EQ(a.multiplies, pow_even_multiplies(SmoothnessOrder(n)));
    EXPECT_NEAR(a.value, std::pow(1.01, 2 * n), 1e-14 * std::pow(1.01, 2 * n));
  }
}

TEST(Audit, ForwardCounts) {
  EXPECT_EQ(audit_ops(Gem{SmoothnessOrder(1)}).total(), 5U);
  const OpCount n1 = audit_ops(Gem{SmoothnessOrder(1)});
  EXPECT_EQ(n1.multiplies, 2U);
  EXPECT_EQ(n1.adds, 1U);
  EXPECT_EQ(n1.reciprocals, 1U);
  EXPECT_EQ(n1.comparisons, 1U);
  EXPECT_EQ(audit_ops(Gem{SmoothnessOrder(2)}).total(), 6U);
  EXPECT_EQ(audit_ops(Gem{SmoothnessOrder(4)}).total(), 7U);
  for (int n = 1; n <= 16; ++n) {
    const OpCount c = audit_ops(Gem{SmoothnessOrder(n)});
    EXPECT_EQ(c.multiplies, pow_even_multiplies(SmoothnessOrder(n)) + 1) << n;
  }
}

TEST(Audit, ReportFlagsDivergence) {
  EXPECT_FALSE(audit_report(Gem{SmoothnessOrder(1)}).diverges_from_claim);
  EXPECT_FALSE(audit_report(Gem{SmoothnessOrder(8)}).diverges_from_claim);
  const auto r3 = audit_report(Gem{SmoothnessOrder(3)});
  EXPECT_TRUE(r3.diverges_from_claim);
  EXPECT_EQ(*r3.claimed_total, 6U);
  EXPECT_EQ(r3.forward.total(), 7U);
  EXPECT_FALSE(audit_report(Relu{}).claimed_total.has_value());
}

TEST(Audit, CachedBackwardCost) {
  for (int n : {1, 2, 5, 9}) {
    const OpCount c = audit_backward_cached(Gem{SmoothnessOrder(n)});
    EXPECT_LE(c.multiplies, 4U);
    EXPECT_LE(c.adds, 2U);
    EXPECT_EQ(c.reciprocals, 0U);
  }
}

TEST(Forward, Examples) {
  const std::vector<double> in = {0, 1, -1};
  const auto r = apply_forward<double>(in, Gem{SmoothnessOrder(1)}, true);
  EXPECT_EQ(r.output, (std::vector<double>{0, 0.5, 0}));
  ASSERT_TRUE(r.cache.has_value());
  EXPECT_EQ(r.cache->gates, (std::vector<double>{0, 0.5, 0}));
  EXPECT_FALSE(r.cache_unavailable);

  const std::vector<double> s3 = {std::sqrt(3.0)};
  const auto r2 = apply_forward<double>(s3, Gem{SmoothnessOrder(1)}, false);
  EXPECT_NEAR(r2.output[0], std::sqrt(3.0) * 0.75, 1e-15);
  EXPECT_NEAR(r2.output[0], 1.2990, 1e-4);
  EXPECT_FALSE(r2.cache.has_value());

  const auto r3 = apply_forward<double>(in, Relu{}, true);
  EXPECT_FALSE(r3.cache.has_value());
  EXPECT_TRUE(r3.cache_unavailable);
  EXPECT_TRUE(apply_forward<double>(std::vector<double>{}, Gem{}, true).output.empty());
}

template <class T>
void check_bit_identical(std::size_t count, unsigned threads) {
  const auto xs = mixed_inputs<T>(count, 77);
  for (const auto& spec : all_specs()) {
    if (std::is_same_v<T, float>) {
      if (const auto* e = std::get_if<EGem>(&spec); e && e->eps.value() < 1e-6) continue;
      if (const auto* s = std::get_if<SEGem>(&spec); s && s->eps.value() < 1e-6) continue;
    }
    const auto r = apply_forward<T>(xs, spec, is_gem_family(spec), threads);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const T want = activate(xs[i], spec);
      using Bits = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
      ASSERT_EQ(std::bit_cast<Bits>(r.output[i]), std::bit_cast<Bits>(want))
          << format_spec(spec) << " x=" << xs[i];
      if (r.cache) {
        ASSERT_EQ(r.cache->gates[i], activate_gate(xs[i], spec)) << format_spec(spec) << " x=" << xs[i];
      }
    }
  }
}

TEST(Forward, BitIdenticalToScalarDouble) { check_bit_identical<double>(4099, 1); }
TEST(Forward, BitIdenticalToScalarFloat) { check_bit_identical<float>(4099, 1); }
TEST(Forward, ThreadedMatchesSequential) {
  const auto xs = mixed_inputs<double>(1 << 17, 3);
  for (const ActivationSpec spec : {ActivationSpec{Gem{SmoothnessOrder(2)}}, ActivationSpec{GeluExact{}}}) {
    const auto a = apply_forward<double>(xs, spec, false, 1).output;
    const auto b = apply_forward<double>(xs, spec, false, 4).output;
    EXPECT_EQ(a, b);
  }
}

TEST(Forward, GatesStayInUnitInterval) {
  const auto xs = mixed_inputs<double>(20000, 4);
  for (const auto& spec : all_specs()) {
    if (!is_gem_family(spec)) continue;
    const auto r = apply_forward<double>(xs, spec, true);
    for (double g : r.cache->gates) {
      ASSERT_GE(g, 0.0);
      ASSERT_LE(g, 1.0);
    }
  }
}

TEST(Forward, IntoRejectsLengthMismatch) {
  std::vector<double> in(4, 1.0);
  std::vector<double> out(3);
  EXPECT_THROW(apply_forward_into<double>(in, out, Gem{}), std::invalid_argument);
}

TEST(Backward, Examples) {
  const ActivationSpec g1 = Gem{SmoothnessOrder(1)};
  GateCache<double> cache{{0.5}, g1};
  EXPECT_EQ(apply_backward<double>(std::vector<double>{1.0}, cache, g1), (std::vector<double>{1.0}));
  cache.gates = {0.0};
  EXPECT_EQ(apply_backward<double>(std::vector<double>{1.0}, cache, g1), (std::vector<double>{0.0}));
  cache.gates = {0.75};
  EXPECT_EQ(apply_backward<double>(std::vector<double>{2.0}, cache, g1), (std::vector<double>{2.25}));

  EXPECT_EQ(apply_backward_direct<double>(std::vector<double>{1.0}, std::vector<double>{5.0}, Relu{}),
            (std::vector<double>{1.0}));
  EXPECT_EQ(apply_backward_direct<double>(std::vector<double>{1.0}, std::vector<double>{0.0}, Silu{}),
            (std::vector<double>{0.5}));
  EXPECT_NEAR(apply_backward_direct<double>(std::vector<double>{1.0}, std::vector<double>{std::sqrt(3.0)}, g1)[0],
              1.125, 1e-15);
}

TEST(Backward, Errors) {
  const ActivationSpec g1 = Gem{SmoothnessOrder(1)};
  GateCache<double> cache{{0.5, 0.5}, g1};
  EXPECT_THROW(apply_backward<double>(std::vector<double>{1.0}, cache, g1), std::invalid_argument);
  EXPECT_THROW(apply_backward<double>(std::vector<double>{1.0, 1.0}, cache, Gem{SmoothnessOrder(2)}),
               std::invalid_argument);
  EXPECT_THROW(apply_backward<double>(std::vector<double>{1.0, 1.0}, cache, Relu{}), std::invalid_argument);
  EXPECT_THROW(apply_backward_direct<double>(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, g1),
               std::invalid_argument);
}

TEST(Backward, CachedMatchesDirectAwayFromDerivativeRoots) {
  // Gem and E-GEM with N ≤ 3, plus SE-GEM on its non-negative side.
  const auto xs = mixed_inputs<double>(50000, 9);
  Rng rng(10);
  std::vector<double> upstream(xs.size());
  for (auto& u : upstream) u = rng.normal();
  for (const auto& spec : all_specs()) {
    if (!is_gem_family(spec) || order_of(spec).value() > 3) continue;
    const auto fwd = apply_forward<double>(xs, spec, true);
    const auto cached = apply_backward<double>(upstream, *fwd.cache, spec);
    const auto direct = apply_backward_direct<double>(upstream, xs, spec);
    const bool segem = std::holds_alternative<SEGem>(spec);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (segem && xs[i] < 0) continue;
      ASSERT_LE(test::ulp_distance(cached[i], direct[i]), 4U) << format_spec(spec) << " x=" << xs[i];
    }
  }
}

TEST(Backward, SegemNegativeSideAgreesOnAbsoluteScale) {
  const auto xs = mixed_inputs<double>(50000, 12);
  std::vector<double> ones(xs.size(), 1.0);
  for (int n : {1, 2, 9}) {
    for (double e : {1e-6, 1e-2, 1.0, 10.0}) {
      const ActivationSpec spec = SEGem{SmoothnessOrder(n), Epsilon(e)};
      const auto fwd = apply_forward<double>(xs, spec, true);
      const auto cached = apply_backward<double>(ones, *fwd.cache, spec);
      const auto direct = apply_backward_direct<double>(ones, xs, spec);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        ASSERT_NEAR(cached[i], direct[i], 8.0 * n * std::numeric_limits<double>::epsilon())
            << format_spec(spec) << " x=" << xs[i];
      }
    }
  }
}

TEST(Bench, DegenerateAndValidation) {
  const BenchReport r = bench(Gem{SmoothnessOrder(1)}, 1, 3, Precision::Double);
  EXPECT_EQ(r.elements, 1U);
  EXPECT_EQ(r.iterations, 3U);
  EXPECT_GT(r.throughput_gelem_per_s, 0.0);
  EXPECT_GT(r.median_ns_per_pass, 0.0);
  EXPECT_EQ(r.opcount.total(), 5U);
  EXPECT_THROW(bench(Relu{}, 0, 5, Precision::Double), std::invalid_argument);
  EXPECT_THROW(bench(Relu{}, 10, 2, Precision::Double), std::invalid_argument);
  EXPECT_THROW(bench(EGem{SmoothnessOrder(1), Epsilon(1e-9)}, 10, 3, Precision::Single), std::invalid_argument);
  const BenchReport f = bench(Silu{}, 1000, 3, Precision::Single);
  EXPECT_EQ(f.precision, Precision::Single);
  EXPECT_NEAR(f.effective_gb_per_s, 2.0 * 1000 * sizeof(float) / f.median_ns_per_pass, 1e-9);
}

TEST(Bench, CsvRow) {
  const BenchReport r = bench(EGem{SmoothnessOrder(2), Epsilon(0.5)}, 64, 3, Precision::Double);
  const std::string row = to_csv_row(r);
  EXPECT_EQ(row.rfind("\"egem:n=2,eps=0.5\",64,3,double,", 0), 0U) << row;
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 11);
  EXPECT_EQ(bench_csv_header(), "spec,elements,iterations,precision,median_ns,gelem_s,gb_s,mul,add,recip,cmp");
}

}  // namespace
}  // namespace gem
