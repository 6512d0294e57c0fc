// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gem/csv.hpp"
#include "gem/nn/data.hpp"
#include "gem/nn/loss.hpp"
#include "gem/nn/network.hpp"
#include "gem/nn/optim.hpp"
#include "gem/random.hpp"

namespace gem::nn {

struct TrainConfig {
  OptimizerConfig optimizer = SgdMomentum{};
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  std::uint64_t seed = 42;
  ScheduleConfig schedule = ConstantSchedule{};
  /// Wall-clock seconds go into the report only when set, so that reports
  /// from identical runs compare equal byte for byte.
  bool record_time = false;
};

struct EpochRow {
  std::size_t epoch = 0;
  double train_loss = 0;
  double train_acc = 0;
  double val_acc = 0;
  double lr = 0;
  double elapsed_s = 0;
};

struct TrainReport {
  std::vector<EpochRow> rows;
  bool diverged = false;
  std::size_t diverged_epoch = 0;

  const EpochRow& final_row() const { return rows.back(); }
};

struct Evaluation {
  double loss = 0;
  double accuracy = 0;
};

inline Evaluation evaluate(const Network& net, const Dataset& data, std::size_t batch_size = 256) {
  if (data.size() == 0) return {};
  double loss = 0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t m = std::min(batch_size, data.size() - start);
    Matrix x(m, data.features.cols());
    std::copy_n(data.features.row(start).begin(), m * data.features.cols(), x.data().begin());
    const LossResult res =
        softmax_cross_entropy(forward(net, x), std::span<const int>(data.labels).subspan(start, m));
    loss += res.loss * static_cast<double>(m);
    correct += res.correct;
  }
  const auto n = static_cast<double>(data.size());
  return {loss / n, static_cast<double>(correct) / n};
}

namespace detail {
inline bool all_finite(Network& net) {
  for (auto p : parameters(net)) {
    for (double v : p) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}
}  // namespace detail

/// Minibatch training with a per-epoch shuffle drawn from Rng(cfg.seed).
/// Row 0 describes the initial network. A non-finite loss or parameter stops
/// the run and sets `diverged`.
inline TrainReport train(Network& net, const Dataset& train_set, const Dataset& val_set, const TrainConfig& cfg) {
  if (train_set.size() == 0) throw std::invalid_argument("training set is empty");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  for (int label : train_set.labels) {
    if (label < 0 || label >= train_set.classes) throw std::invalid_argument("label out of range");
  }
  validate(cfg.schedule);
  Optimizer opt(cfg.optimizer, net);
  Rng rng(cfg.seed);
  const double lr0 = base_lr(cfg.optimizer);
  const std::size_t steps_per_epoch = (train_set.size() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps = steps_per_epoch * cfg.epochs;
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    if (!cfg.record_time) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  TrainReport report;
  {
    const Evaluation tr = evaluate(net, train_set);
    const Evaluation va = evaluate(net, val_set);
    report.rows.push_back({0, tr.loss, tr.accuracy, va.accuracy, scheduled_lr(lr0, cfg.schedule, 0, 0, total_steps),
                           elapsed()});
  }

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t width = train_set.features.cols();
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    const double epoch_lr = scheduled_lr(lr0, cfg.schedule, epoch - 1, step, total_steps);
    bool finite = true;
    for (std::size_t start = 0; start < order.size() && finite; start += cfg.batch_size, ++step) {
      const std::size_t m = std::min(cfg.batch_size, order.size() - start);
      Matrix x(m, width);
      std::vector<int> y(m);
      for (std::size_t i = 0; i < m; ++i) {
        const auto src = train_set.features.row(order[start + i]);
        std::copy(src.begin(), src.end(), x.row(i).begin());
        y[i] = train_set.labels[order[start + i]];
      }
      Tape tape;
      const Matrix logits = forward(net, x, &tape);
      const LossResult res = softmax_cross_entropy(logits, y);
      if (!std::isfinite(res.loss)) {
        finite = false;
        break;
      }
      const ParamGrads grads = backward(net, tape, res.grad_logits);
      opt.step(net, grads, scheduled_lr(lr0, cfg.schedule, epoch - 1, step, total_steps));
      finite = detail::all_finite(net);
    }
    if (!finite) {
      report.diverged = true;
      report.diverged_epoch = epoch;
      report.rows.push_back({epoch, NAN, NAN, NAN, epoch_lr, elapsed()});
      break;
    }
    const Evaluation tr = evaluate(net, train_set);
    const Evaluation va = evaluate(net, val_set);
    report.rows.push_back({epoch, tr.loss, tr.accuracy, va.accuracy, epoch_lr, elapsed()});
  }
  return report;
}

inline std::string train_csv_header() { return "epoch,train_loss,train_acc,val_acc,lr,elapsed_s"; }

inline void write_train_csv(std::ostream& out, const TrainReport& report) {
  out << train_csv_header() << '\n';
  for (const auto& r : report.rows) {
    out << r.epoch << ',' << csv::number(r.train_loss) << ',' << csv::number(r.train_acc) << ','
        << csv::number(r.val_acc) << ',' << csv::number(r.lr) << ',' << csv::number(r.elapsed_s) << '\n';
  }
}

}  // namespace gem::nn
