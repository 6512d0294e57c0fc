// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

namespace gem {

/// Smoothness order N of the GEM family. The activation is C^{2N} at the
/// origin; N = 0 degenerates to ReLU/2 and is rejected.
class SmoothnessOrder {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 64;

  constexpr explicit SmoothnessOrder(int n) : n_(n) {
    if (n < kMin || n > kMax) {
      throw std::invalid_argument("smoothness order N must lie in [1, 64], got " + std::to_string(n));
    }
  }

  constexpr int value() const noexcept { return n_; }
  constexpr int two_n() const noexcept { return 2 * n_; }

  friend constexpr bool operator==(SmoothnessOrder, SmoothnessOrder) = default;

 private:
  int n_;
};

enum class Precision { Single, Double };

template <class T>
constexpr Precision precision_of() {
  return std::is_same_v<T, float> ? Precision::Single : Precision::Double;
}

inline const char* to_string(Precision p) { return p == Precision::Single ? "single" : "double"; }

/// Positive scale parameter of E-GEM / SE-GEM.
class Epsilon {
 public:
  /// Below this value a single-precision ε is indistinguishable from zero
  /// next to x^{2N} over the useful input range.
  static constexpr double kSingleFloor = 1e-7;

  explicit Epsilon(double value, Precision precision = Precision::Double) : value_(value) {
    if (!(value > 0.0) || value == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("epsilon must be a positive finite real, got " + std::to_string(value));
    }
    check(precision);
  }

  double value() const noexcept { return value_; }

  /// Throws when this ε is below the floor for the requested precision.
  void check(Precision precision) const {
    if (precision == Precision::Single && value_ < kSingleFloor) {
      throw std::invalid_argument("epsilon " + std::to_string(value_) +
                                  " is below the single-precision floor 1e-7");
    }
  }

  friend bool operator==(const Epsilon&, const Epsilon&) = default;

 private:
  double value_;
};

// Activation variants. GEM-family members carry their parameters.
struct Relu {
  friend bool operator==(const Relu&, const Relu&) = default;
};
struct Silu {
  friend bool operator==(const Silu&, const Silu&) = default;
};
struct GeluExact {
  friend bool operator==(const GeluExact&, const GeluExact&) = default;
};
struct GeluTanh {
  friend bool operator==(const GeluTanh&, const GeluTanh&) = default;
};
struct Gem {
  SmoothnessOrder n{1};
  friend bool operator==(const Gem&, const Gem&) = default;
};
struct EGem {
  SmoothnessOrder n{1};
  Epsilon eps{1.0};
  friend bool operator==(const EGem&, const EGem&) = default;
};
struct SEGem {
  SmoothnessOrder n{1};
  Epsilon eps{1.0};
  friend bool operator==(const SEGem&, const SEGem&) = default;
};

using ActivationSpec = std::variant<Relu, Silu, GeluExact, GeluTanh, Gem, EGem, SEGem>;

inline bool is_gem_family(const ActivationSpec& spec) {
  return std::holds_alternative<Gem>(spec) || std::holds_alternative<EGem>(spec) ||
         std::holds_alternative<SEGem>(spec);
}

/// Smoothness order of a GEM-family spec; throws for baselines.
inline SmoothnessOrder order_of(const ActivationSpec& spec) {
  if (const auto* g = std::get_if<Gem>(&spec)) return g->n;
  if (const auto* e = std::get_if<EGem>(&spec)) return e->n;
  if (const auto* s = std::get_if<SEGem>(&spec)) return s->n;
  throw std::invalid_argument("baseline activation has no smoothness order");
}

struct LipschitzResult {
  double constant;  // L_N = max β'_N
  double argmax;    // x at which the maximum is attained
};

struct TroughResult {
  double argmin;
  double depth;
};

}  // namespace gem
