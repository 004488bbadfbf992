// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

double evaluate(const LossBuilder& f, ParamSet& params) {
  Graph g(false);
  Var loss = f(g, params);
  if (loss.value().size() != 1) throw InvalidShape("loss is not a scalar");
  return loss.value().data[0];
}

}  // namespace

GradCheckResult finite_diff_check(const LossBuilder& f, ParamSet& params, double eps) {
  const double first = evaluate(f, params);
  const double second = evaluate(f, params);
  if (first != second) {
    throw Error("finite_diff_check: loss is not deterministic (" + std::to_string(first) +
                " vs " + std::to_string(second) + ")");
  }

  params.zero_grad();
  {
    Graph g(true);
    Var loss = f(g, params);
    g.backward(loss);
  }

  GradCheckResult result;
  for (auto& [name, t] : params) {
    if (!t.requires_grad) continue;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double analytic = t.has_grad() ? t.grad[i] : 0.0;
      const double saved = t.data[i];
      t.data[i] = saved + eps;
      const double up = evaluate(f, params);
      t.data[i] = saved - eps;
      const double down = evaluate(f, params);
      t.data[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double err = std::abs(analytic - numeric) / denom;
      if (err > result.max_rel_error || result.worst_param.empty()) {
        if (err >= result.max_rel_error) {
          result.max_rel_error = err;
          result.worst_param = name;
          result.worst_index = i;
          result.analytic = analytic;
          result.numeric = numeric;
        }
      }
    }
  }
  params.zero_grad();
  return result;
}

}  // namespace cogtrans
