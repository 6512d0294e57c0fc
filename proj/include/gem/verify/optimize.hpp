// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gem::verify {

struct Extremum {
  double argmax;
  double max;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi]. After
/// `iters` steps the bracket width is (hi - lo)·0.618^iters.
template <class F>
Extremum maximize_unimodal(const F& f, double lo, double hi, int iters) {
  if (!(lo < hi)) throw std::invalid_argument("maximize_unimodal needs lo < hi");
  const auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw std::domain_error("maximize_unimodal: f(" + std::to_string(x) + ") is not finite");
    return v;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int i = 0; i < iters && b - a > 0; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

}  // namespace gem::verify
