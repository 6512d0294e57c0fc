// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "gem/core/spec_format.hpp"
#include "gem/nn/config.hpp"

namespace gem::nn {

/// Deep-MLP recipe used to compare smoothness orders on the spirals set:
/// 18 hidden layers of width 32, no skip connections.
inline constexpr std::string_view kDeepAblationRecipe =
    "dataset = spirals\n"
    "n_per_class = 200\n"
    "val_per_class = 200\n"
    "noise = 0.05\n"
    "depth = 18\n"
    "width = 32\n"
    "bias_init = 0.5\n"
    "epochs = 200\n"
    "batch_size = 32\n"
    "optimizer = adamw\n"
    "lr = 0.001\n"
    "weight_decay = 0\n";

inline ExperimentConfig deep_ablation_config(const ActivationSpec& act, std::uint64_t seed) {
  ExperimentConfig cfg = parse_experiment_config(kDeepAblationRecipe);
  cfg.activation = act;
  cfg.train.seed = seed;
  return cfg;
}

inline TrainReport run_deep_ablation(const ActivationSpec& act, std::uint64_t seed) {
  return run_experiment(deep_ablation_config(act, seed));
}

}  // namespace gem::nn
