// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "specsim_cli.hpp"

int main(int argc, char** argv) { return specsim::cli::run(argc, argv); }
