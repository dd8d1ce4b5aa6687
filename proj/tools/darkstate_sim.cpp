// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "darkstate/cli.hpp"

int main(int argc, char** argv) {
  return darkstate::cli::run_cli(argc, argv, std::cout, std::cerr);
}
