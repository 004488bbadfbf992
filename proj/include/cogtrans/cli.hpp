// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace cogtrans {

// Entry point of the cogtrans tool. Returns 0 on success, 2 for usage errors
// and 1 for any other failure.
int run_cli(int argc, const char* const* argv);

}  // namespace cogtrans
