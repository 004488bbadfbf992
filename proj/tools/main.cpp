// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/cli.hpp"

int main(int argc, char** argv) { return cogtrans::run_cli(argc, argv); }
