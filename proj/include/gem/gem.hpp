// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gem/core/activations.hpp"
#include "gem/core/analytic.hpp"
#include "gem/core/counting.hpp"
#include "gem/core/power.hpp"
#include "gem/core/spec_format.hpp"
#include "gem/core/special.hpp"
#include "gem/core/types.hpp"
#include "gem/csv.hpp"
#include "gem/kernels/audit.hpp"
#include "gem/kernels/bench.hpp"
#include "gem/kernels/kernels.hpp"
#include "gem/nn/ablation.hpp"
#include "gem/nn/config.hpp"
#include "gem/nn/data.hpp"
#include "gem/nn/dead_neuron.hpp"
#include "gem/nn/loss.hpp"
#include "gem/nn/matrix.hpp"
#include "gem/nn/network.hpp"
#include "gem/nn/optim.hpp"
#include "gem/nn/probe.hpp"
#include "gem/nn/train.hpp"
#include "gem/random.hpp"
#include "gem/verify/finite_diff.hpp"
#include "gem/verify/optimize.hpp"
#include "gem/verify/quadrature.hpp"
#include "gem/verify/report.hpp"
#include "gem/verify/suites.hpp"
