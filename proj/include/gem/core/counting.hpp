// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Instrumented scalar used to audit per-element operation counts. Every
// activation in core/ is a template over its scalar type, so running the
// exact production code path with Counted<double> yields the true count.

#include <cmath>
#include <cstdint>
#include <type_traits>

namespace gem {

struct OpCount {
  std::uint64_t multiplies = 0;
  std::uint64_t adds = 0;  // additions and subtractions
  std::uint64_t reciprocals = 0;  // divisions and reciprocals
  std::uint64_t comparisons = 0;
  std::uint64_t transcendentals = 0;  // exp, erf, tanh, log calls (not serialized)

  std::uint64_t total() const noexcept { return multiplies + adds + reciprocals + comparisons; }

  friend bool operator==(const OpCount&, const OpCount&) = default;
};

namespace detail {
inline thread_local OpCount* active_tally = nullptr;

inline void tally(std::uint64_t OpCount::*field) {
  if (active_tally != nullptr) ++(active_tally->*field);
}
}  // namespace detail

/// Collects counts from Counted<> arithmetic for the scope's lifetime.
class OpTally {
 public:
  OpTally() : previous_(detail::active_tally) { detail::active_tally = &count_; }
  ~OpTally() { detail::active_tally = previous_; }
  OpTally(const OpTally&) = delete;
  OpTally& operator=(const OpTally&) = delete;

  const OpCount& count() const noexcept { return count_; }

 private:
  OpCount count_{};
  OpCount* previous_;
};

template <class T>
class Counted {
 public:
  using value_type = T;

  constexpr Counted() = default;
  // Implicit so that literal constants participate in generic code; constant
  // construction is folded and not counted.
  constexpr Counted(T v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  constexpr T value() const noexcept { return v_; }

  friend Counted operator+(Counted a, Counted b) {
    detail::tally(&OpCount::adds);
    return Counted(a.v_ + b.v_);
  }
  friend Counted operator-(Counted a, Counted b) {
    detail::tally(&OpCount::adds);
    return Counted(a.v_ - b.v_);
  }
  friend Counted operator*(Counted a, Counted b) {
    detail::tally(&OpCount::multiplies);
    return Counted(a.v_ * b.v_);
  }
  friend Counted operator/(Counted a, Counted b) {
    detail::tally(&OpCount::reciprocals);
    return Counted(a.v_ / b.v_);
  }
  // Sign flip is a bit operation.
  friend Counted operator-(Counted a) { return Counted(-a.v_); }

  friend bool operator<(Counted a, Counted b) {
    detail::tally(&OpCount::comparisons);
    return a.v_ < b.v_;
  }
  friend bool operator>(Counted a, Counted b) {
    detail::tally(&OpCount::comparisons);
    return a.v_ > b.v_;
  }
  friend bool operator<=(Counted a, Counted b) {
    detail::tally(&OpCount::comparisons);
    return a.v_ <= b.v_;
  }
  friend bool operator>=(Counted a, Counted b) {
    detail::tally(&OpCount::comparisons);
    return a.v_ >= b.v_;
  }

 private:
  T v_{};
};

template <class T>
Counted<T> exp(Counted<T> x) {
  detail::tally(&OpCount::transcendentals);
  return Counted<T>(std::exp(x.value()));
}
template <class T>
Counted<T> erf(Counted<T> x) {
  detail::tally(&OpCount::transcendentals);
  return Counted<T>(std::erf(x.value()));
}
template <class T>
Counted<T> erfc(Counted<T> x) {
  detail::tally(&OpCount::transcendentals);
  return Counted<T>(std::erfc(x.value()));
}
template <class T>
Counted<T> tanh(Counted<T> x) {
  detail::tally(&OpCount::transcendentals);
  return Counted<T>(std::tanh(x.value()));
}

template <class T>
struct is_counted : std::false_type {};
template <class T>
struct is_counted<Counted<T>> : std::true_type {};

/// Underlying floating-point value, for integer-side inspection such as
/// exponent extraction. Not counted.
template <class T>
constexpr auto raw(T x) noexcept {
  if constexpr (is_counted<T>::value) {
    return x.value();
  } else {
    return x;
  }
}

template <class T>
struct raw_type {
  using type = T;
};
template <class T>
struct raw_type<Counted<T>> {
  using type = T;
};
template <class T>
using raw_type_t = typename raw_type<T>::type;

}  // namespace gem
