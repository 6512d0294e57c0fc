// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Line-oriented experiment configuration:
//
//   # comment
//   key = value
//
// Keys cover the training recipe (optimizer, schedule, epochs, …), the data
// source and the model shape. Seeds: the network is initialised from seed+1,
// synthetic training data from seed+2, validation data from seed+3, and the
// shuffle stream from seed itself.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gem/core/spec_format.hpp"
#include "gem/nn/data.hpp"
#include "gem/nn/network.hpp"
#include "gem/nn/train.hpp"

namespace gem::nn {

struct ExperimentConfig {
  TrainConfig train;
  std::string optimizer = "sgd";
  double lr = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  std::string schedule = "constant";
  std::vector<std::size_t> milestones;
  double gamma = 0.1;
  std::size_t warmup_steps = 0;

  std::string dataset = "spirals";
  std::size_t n_per_class = 200;
  std::size_t val_per_class = 200;
  double noise = 0.05;
  std::string train_images, train_labels, val_images, val_labels;

  ActivationSpec activation = Gem{SmoothnessOrder(1)};
  std::size_t width = 32;
  std::size_t depth = 2;
  double bias_init = 0.0;
};

inline constexpr std::array<std::string_view, 26> kConfigKeys = {
    "optimizer",    "lr",           "momentum",     "weight_decay", "beta1",       "beta2",     "epochs",
    "batch_size",   "seed",         "schedule",     "milestones",   "gamma",       "warmup_steps",
    "record_time",  "dataset",      "n_per_class",  "val_per_class", "noise",      "train_images",
    "train_labels", "val_images",   "val_labels",   "activation",   "width",       "depth",
    "bias_init"};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T v{};
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
  }
  return v;
}

inline std::string valid_keys() {
  std::string s;
  for (auto k : kConfigKeys) {
    if (!s.empty()) s += ", ";
    s += k;
  }
  return s;
}

}  // namespace detail

inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  using detail::parse_number;
  const auto choice = [&](std::initializer_list<std::string_view> allowed) {
    if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
      throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'; expected " +
                        list);
    }
    return std::string(value);
  };
  if (key == "optimizer") cfg.optimizer = choice({"sgd", "adamw"});
  else if (key == "lr") cfg.lr = parse_number<double>(key, value);
  else if (key == "momentum") cfg.momentum = parse_number<double>(key, value);
  else if (key == "weight_decay") cfg.weight_decay = parse_number<double>(key, value);
  else if (key == "beta1") cfg.beta1 = parse_number<double>(key, value);
  else if (key == "beta2") cfg.beta2 = parse_number<double>(key, value);
  else if (key == "epochs") cfg.train.epochs = parse_number<std::size_t>(key, value);
  else if (key == "batch_size") cfg.train.batch_size = parse_number<std::size_t>(key, value);
  else if (key == "seed") cfg.train.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "schedule") cfg.schedule = choice({"constant", "multistep", "cosine"});
  else if (key == "milestones") {
    cfg.milestones.clear();
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      cfg.milestones.push_back(parse_number<std::size_t>(key, detail::trim(rest.substr(0, comma))));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  } else if (key == "gamma") cfg.gamma = parse_number<double>(key, value);
  else if (key == "warmup_steps") cfg.warmup_steps = parse_number<std::size_t>(key, value);
  else if (key == "record_time") cfg.train.record_time = choice({"0", "1"}) == "1";
  else if (key == "dataset") cfg.dataset = choice({"blobs", "spirals", "idx"});
  else if (key == "n_per_class") cfg.n_per_class = parse_number<std::size_t>(key, value);
  else if (key == "val_per_class") cfg.val_per_class = parse_number<std::size_t>(key, value);
  else if (key == "noise") cfg.noise = parse_number<double>(key, value);
  else if (key == "train_images") cfg.train_images = value;
  else if (key == "train_labels") cfg.train_labels = value;
  else if (key == "val_images") cfg.val_images = value;
  else if (key == "val_labels") cfg.val_labels = value;
  else if (key == "activation") {
    try {
      cfg.activation = parse_spec(value);
    } catch (const SpecParseError& e) {
      throw ConfigError(std::string("invalid activation: ") + e.what());
    }
  } else if (key == "width") cfg.width = parse_number<std::size_t>(key, value);
  else if (key == "depth") cfg.depth = parse_number<std::size_t>(key, value);
  else if (key == "bias_init") cfg.bias_init = parse_number<double>(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'; valid keys: " + detail::valid_keys());
}

/// Applies one "key=value" string.
inline void apply_assignment(ExperimentConfig& cfg, std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(line) + "'");
  apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
}

/// Resolves the optimizer and schedule variants from the flat settings.
inline void finalize(ExperimentConfig& cfg) {
  if (cfg.optimizer == "sgd") {
    cfg.train.optimizer = SgdMomentum{cfg.lr, cfg.momentum, cfg.weight_decay};
  } else {
    cfg.train.optimizer = AdamW{cfg.lr, cfg.beta1, cfg.beta2, cfg.weight_decay};
  }
  if (cfg.schedule == "multistep") cfg.train.schedule = MultiStepSchedule{cfg.milestones, cfg.gamma};
  else if (cfg.schedule == "cosine") cfg.train.schedule = CosineSchedule{cfg.warmup_steps};
  else cfg.train.schedule = ConstantSchedule{};
  try {
    validate(cfg.train.optimizer);
    validate(cfg.train.schedule);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.train.batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (cfg.width < 1) throw ConfigError("width must be at least 1");
  if (!std::isfinite(cfg.bias_init)) throw ConfigError("bias_init must be finite");
}

inline ExperimentConfig parse_experiment_config(std::string_view text, ExperimentConfig cfg = {}) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    try {
      apply_assignment(cfg, line);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  finalize(cfg);
  return cfg;
}

struct ExperimentData {
  Dataset train;
  Dataset val;
};

inline ExperimentData load_experiment_data(const ExperimentConfig& cfg) {
  if (cfg.dataset == "idx") {
    if (cfg.train_images.empty() || cfg.train_labels.empty()) {
      throw ConfigError("dataset=idx needs train_images and train_labels");
    }
    Dataset tr = load_idx(cfg.train_images, cfg.train_labels);
    Dataset va = cfg.val_images.empty() ? Dataset{Matrix(0, tr.features.cols()), {}, tr.classes}
                                        : load_idx(cfg.val_images, cfg.val_labels);
    va.classes = tr.classes = std::max(tr.classes, va.classes);
    return {std::move(tr), std::move(va)};
  }
  const auto kind = cfg.dataset == "blobs" ? SyntheticKind::Blobs : SyntheticKind::Spirals;
  return {make_synthetic(kind, cfg.n_per_class, cfg.noise, cfg.train.seed + 2),
          make_synthetic(kind, cfg.val_per_class, cfg.noise, cfg.train.seed + 3)};
}

inline TrainReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentData data = load_experiment_data(cfg);
  Network net = make_mlp(data.train.features.cols(), cfg.width, cfg.depth, static_cast<std::size_t>(data.train.classes),
                         cfg.activation, cfg.train.seed + 1, cfg.bias_init);
  return train(net, data.train, data.val, cfg.train);
}

}  // namespace gem::nn
