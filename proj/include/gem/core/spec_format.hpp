// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Text form of ActivationSpec:
//   relu | silu | gelu | gelu_tanh
//   gem:n=<int> | egem:n=<int>,eps=<float> | segem:n=<int>,eps=<float>
// Omitted parameters default to n=1, eps=1. format() always writes every
// parameter, with ε in shortest round-trip form, so parse(format(s)) == s.

#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "gem/core/types.hpp"
#include "gem/csv.hpp"

namespace gem {

class SpecParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw SpecParseError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

inline double parse_double(std::string_view text, std::string_view what) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw SpecParseError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace detail

inline ActivationSpec parse_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view params = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  if (name == "relu" || name == "silu" || name == "gelu" || name == "gelu_tanh") {
    if (colon != std::string_view::npos) {
      throw SpecParseError("activation '" + std::string(name) + "' takes no parameters");
    }
    if (name == "relu") return Relu{};
    if (name == "silu") return Silu{};
    if (name == "gelu") return GeluExact{};
    return GeluTanh{};
  }

  const bool takes_eps = name == "egem" || name == "segem";
  if (name != "gem" && !takes_eps) {
    throw SpecParseError("unknown activation '" + std::string(name) +
                         "'; expected relu|silu|gelu|gelu_tanh|gem|egem|segem");
  }

  std::optional<int> n;
  std::optional<double> eps;
  std::string_view rest = params;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (comma != std::string_view::npos && rest.empty()) throw SpecParseError("trailing ',' in activation spec");
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw SpecParseError("expected key=value in activation spec, got '" + std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "n" && !n) {
      n = detail::parse_int(value, "n");
    } else if (key == "eps" && takes_eps && !eps) {
      eps = detail::parse_double(value, "eps");
    } else {
      throw SpecParseError("unexpected or repeated key '" + std::string(key) + "' for '" + std::string(name) + "'");
    }
  }

  try {
    const SmoothnessOrder order(n.value_or(1));
    if (name == "gem") return Gem{order};
    const Epsilon e(eps.value_or(1.0));
    if (name == "egem") return EGem{order, e};
    return SEGem{order, e};
  } catch (const SpecParseError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw SpecParseError(err.what());
  }
}

inline std::string format_spec(const ActivationSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Relu>) return "relu";
        else if constexpr (std::is_same_v<S, Silu>) return "silu";
        else if constexpr (std::is_same_v<S, GeluExact>) return "gelu";
        else if constexpr (std::is_same_v<S, GeluTanh>) return "gelu_tanh";
        else if constexpr (std::is_same_v<S, Gem>) return "gem:n=" + std::to_string(s.n.value());
        else if constexpr (std::is_same_v<S, EGem>)
          return "egem:n=" + std::to_string(s.n.value()) + ",eps=" + csv::number(s.eps.value());
        else
          return "segem:n=" + std::to_string(s.n.value()) + ",eps=" + csv::number(s.eps.value());
      },
      spec);
}

}  // namespace gem
