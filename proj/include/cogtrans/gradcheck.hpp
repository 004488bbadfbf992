// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include "cogtrans/graph.hpp"

namespace cogtrans {

// Builds a scalar loss from the parameters into the given graph. Must be
// deterministic: same parameter values, same loss.
using LossBuilder = std::function<Var(Graph&, ParamSet&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares reverse-mode gradients with central differences over every scalar
// of every trainable parameter. The relative error of one entry is
// |g_ad - g_fd| / max(|g_ad|, |g_fd|, 1e-8). Throws Error when two forward
// passes on identical parameters disagree.
GradCheckResult finite_diff_check(const LossBuilder& f, ParamSet& params, double eps = 1e-5);

}  // namespace cogtrans
