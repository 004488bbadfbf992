// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cogtrans/tensor.hpp"

namespace cogtrans {

enum class OptimizerKind { kAdam, kSgd, kMomentum, kNesterov, kRmsprop, kAdagrad, kAdadelta };

const char* optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(const std::string& name);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 1e-3;
  // Inverse-time decay per update: lr_t = lr / (1 + decay * t).
  double decay = 0.0;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  // 0 picks the kind's default: 0.9 for RMSprop, 0.95 for Adadelta.
  double rho = 0.0;
  // 0 picks the kind's default: 1e-6 for Adadelta, 1e-8 otherwise.
  double epsilon = 0.0;
  double l2 = 0.0;
  // Global gradient-norm clip; 0 disables.
  double clip_norm = 0.0;
  // Linear warm-up of the learning rate over this many updates; 0 disables.
  std::size_t warmup_steps = 0;

  double effective_rho() const;
  double effective_epsilon() const;
};

class Optimizer {
 public:
  explicit Optimizer(OptimizerSpec spec);

  const OptimizerSpec& spec() const { return spec_; }
  std::size_t steps() const { return t_; }
  double current_lr() const;

  // Call before the forward pass of every update. Nesterov moves the
  // parameters to the look-ahead point theta + momentum * v; a no-op for every
  // other kind.
  void prepare(ParamSet& params);

  // Applies one update to every trainable parameter from its grad buffer.
  // Throws MissingGrad when a trainable parameter has no gradient.
  void step(ParamSet& params);

  // Per-parameter state buffers, e.g. {"m", "v"} for Adam.
  const std::map<std::string, std::map<std::string, std::vector<double>>>& state() const {
    return state_;
  }

 private:
  std::vector<double>& buffer(const std::string& param, const char* name, std::size_t n);

  OptimizerSpec spec_;
  std::size_t t_ = 0;
  bool prepared_ = false;
  std::map<std::string, std::map<std::string, std::vector<double>>> state_;
};

}  // namespace cogtrans
