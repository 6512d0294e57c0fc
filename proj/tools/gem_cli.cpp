// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "gem_cli.hpp"

int main(int argc, char** argv) { return gem::cli::run(argc, argv); }
