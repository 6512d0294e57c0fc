// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gem::nn {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("dimension mismatch: " + what);
}

/// x·Wᵀ (+ bias), with x: batch×in and W: out×in.
inline Matrix affine(const Matrix& x, const Matrix& w, std::span<const double> bias = {}) {
  require_dims(x.cols() == w.cols(), "input width " + std::to_string(x.cols()) + " vs layer input " +
                                         std::to_string(w.cols()));
  require_dims(bias.empty() || bias.size() == w.rows(), "bias length");
  Matrix out(x.rows(), w.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    for (std::size_t o = 0; o < w.rows(); ++o) {
      const auto wo = w.row(o);
      double acc = bias.empty() ? 0.0 : bias[o];
      for (std::size_t i = 0; i < xr.size(); ++i) acc += xr[i] * wo[i];
      out(r, o) = acc;
    }
  }
  return out;
}

/// Accumulates dzᵀ·x into dw (out×in).
inline void accumulate_weight_grad(const Matrix& dz, const Matrix& x, Matrix& dw) {
  for (std::size_t r = 0; r < dz.rows(); ++r) {
    const auto xr = x.row(r);
    for (std::size_t o = 0; o < dz.cols(); ++o) {
      const double g = dz(r, o);
      if (g == 0.0) continue;
      auto dwo = dw.row(o);
      for (std::size_t i = 0; i < xr.size(); ++i) dwo[i] += g * xr[i];
    }
  }
}

/// Accumulates dz·W into dx (batch×in).
inline void accumulate_input_grad(const Matrix& dz, const Matrix& w, Matrix& dx) {
  for (std::size_t r = 0; r < dz.rows(); ++r) {
    auto dxr = dx.row(r);
    for (std::size_t o = 0; o < dz.cols(); ++o) {
      const double g = dz(r, o);
      if (g == 0.0) continue;
      const auto wo = w.row(o);
      for (std::size_t i = 0; i < dxr.size(); ++i) dxr[i] += g * wo[i];
    }
  }
}

}  // namespace gem::nn
