// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "gem/nn/matrix.hpp"

namespace gem::nn {

struct LossResult {
  double loss = 0;        // mean over the batch
  Matrix grad_logits;     // ∂loss/∂logits
  std::size_t correct = 0;
};

/// Mean softmax cross-entropy, with the log-sum-exp shifted by the row max.
inline LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels) {
  require_dims(logits.rows() == labels.size(), "logits rows vs labels");
  LossResult res{0.0, Matrix(logits.rows(), logits.cols()), 0};
  const double inv_batch = logits.rows() > 0 ? 1.0 / static_cast<double>(logits.rows()) : 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto row = logits.row(r);
    const auto label = static_cast<std::size_t>(labels[r]);
    require_dims(label < row.size(), "label out of range");
    const auto top = std::max_element(row.begin(), row.end());
    const double m = *top;
    double sum = 0;
    for (double v : row) sum += std::exp(v - m);
    const double log_z = m + std::log(sum);
    res.loss += (log_z - row[label]) * inv_batch;
    if (static_cast<std::size_t>(top - row.begin()) == label) ++res.correct;
    auto g = res.grad_logits.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      g[c] = (std::exp(row[c] - log_z) - (c == label ? 1.0 : 0.0)) * inv_batch;
    }
  }
  return res;
}

}  // namespace gem::nn
