// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "cogtrans/errors.hpp"

namespace cogtrans {

const char* optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kMomentum: return "momentum";
    case OptimizerKind::kNesterov: return "nesterov";
    case OptimizerKind::kRmsprop: return "rmsprop";
    case OptimizerKind::kAdagrad: return "adagrad";
    case OptimizerKind::kAdadelta: return "adadelta";
  }
  return "adam";
}

OptimizerKind parse_optimizer(const std::string& name) {
  for (OptimizerKind k : {OptimizerKind::kAdam, OptimizerKind::kSgd, OptimizerKind::kMomentum,
                          OptimizerKind::kNesterov, OptimizerKind::kRmsprop,
                          OptimizerKind::kAdagrad, OptimizerKind::kAdadelta}) {
    if (name == optimizer_name(k)) return k;
  }
  throw InvalidArgument("unknown optimizer '" + name + "'");
}

double OptimizerSpec::effective_rho() const {
  if (rho > 0.0) return rho;
  return kind == OptimizerKind::kAdadelta ? 0.95 : 0.9;
}

double OptimizerSpec::effective_epsilon() const {
  if (epsilon > 0.0) return epsilon;
  return kind == OptimizerKind::kAdadelta ? 1e-6 : 1e-8;
}

Optimizer::Optimizer(OptimizerSpec spec) : spec_(spec) {
  if (spec_.lr < 0.0) throw InvalidArgument("learning rate must be >= 0");
  if (spec_.decay < 0.0) throw InvalidArgument("decay must be >= 0");
}

double Optimizer::current_lr() const {
  double lr = spec_.lr / (1.0 + spec_.decay * static_cast<double>(t_));
  if (spec_.warmup_steps > 0) {
    lr *= std::min(1.0, static_cast<double>(t_ + 1) / static_cast<double>(spec_.warmup_steps));
  }
  return lr;
}

std::vector<double>& Optimizer::buffer(const std::string& param, const char* name,
                                       std::size_t n) {
  std::vector<double>& b = state_[param][name];
  if (b.size() != n) b.assign(n, 0.0);
  return b;
}

void Optimizer::prepare(ParamSet& params) {
  if (spec_.kind != OptimizerKind::kNesterov) return;
  for (auto& [name, p] : params) {
    if (!p.requires_grad) continue;
    std::vector<double>& v = buffer(name, "velocity", p.size());
    std::vector<double>& saved = buffer(name, "theta", p.size());
    saved = p.data;
    for (std::size_t i = 0; i < p.size(); ++i) p.data[i] += spec_.momentum * v[i];
  }
  prepared_ = true;
}

void Optimizer::step(ParamSet& params) {
  double clip = 1.0;
  for (auto& [name, p] : params) {
    if (p.requires_grad && !p.has_grad()) throw MissingGrad("no gradient for '" + name + "'");
  }
  if (spec_.clip_norm > 0.0) {
    double sq = 0.0;
    for (auto& [name, p] : params) {
      if (!p.requires_grad) continue;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double g = p.grad[i] + spec_.l2 * p.data[i];
        sq += g * g;
      }
    }
    const double norm = std::sqrt(sq);
    if (norm > spec_.clip_norm) clip = spec_.clip_norm / norm;
  }
  const double lr = current_lr();
  const double mu = spec_.momentum;
  const double rho = spec_.effective_rho();
  const double eps = spec_.effective_epsilon();
  const double t = static_cast<double>(t_ + 1);
  for (auto& [name, p] : params) {
    if (!p.requires_grad) continue;
    const std::size_t n = p.size();
    auto grad = [&](std::size_t i) { return clip * (p.grad[i] + spec_.l2 * p.data[i]); };
    switch (spec_.kind) {
      case OptimizerKind::kSgd:
        for (std::size_t i = 0; i < n; ++i) p.data[i] -= lr * grad(i);
        break;
      case OptimizerKind::kMomentum: {
        std::vector<double>& v = buffer(name, "velocity", n);
        for (std::size_t i = 0; i < n; ++i) {
          v[i] = mu * v[i] - lr * grad(i);
          p.data[i] += v[i];
        }
        break;
      }
      case OptimizerKind::kNesterov: {
        std::vector<double>& v = buffer(name, "velocity", n);
        std::vector<double>& saved = buffer(name, "theta", n);
        if (!prepared_) saved = p.data;
        for (std::size_t i = 0; i < n; ++i) {
          v[i] = mu * v[i] - lr * grad(i);
          p.data[i] = saved[i] + v[i];
        }
        break;
      }
      case OptimizerKind::kAdam: {
        std::vector<double>& m = buffer(name, "m", n);
        std::vector<double>& v = buffer(name, "v", n);
        const double c1 = 1.0 - std::pow(spec_.beta1, t);
        const double c2 = 1.0 - std::pow(spec_.beta2, t);
        for (std::size_t i = 0; i < n; ++i) {
          const double g = grad(i);
          m[i] = spec_.beta1 * m[i] + (1.0 - spec_.beta1) * g;
          v[i] = spec_.beta2 * v[i] + (1.0 - spec_.beta2) * g * g;
          p.data[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
        break;
      }
      case OptimizerKind::kRmsprop: {
        std::vector<double>& e = buffer(name, "mean_square", n);
        for (std::size_t i = 0; i < n; ++i) {
          const double g = grad(i);
          e[i] = rho * e[i] + (1.0 - rho) * g * g;
          p.data[i] -= lr * g / (std::sqrt(e[i]) + eps);
        }
        break;
      }
      case OptimizerKind::kAdagrad: {
        std::vector<double>& acc = buffer(name, "accumulator", n);
        for (std::size_t i = 0; i < n; ++i) {
          const double g = grad(i);
          acc[i] += g * g;
          p.data[i] -= lr * g / (std::sqrt(acc[i]) + eps);
        }
        break;
      }
      case OptimizerKind::kAdadelta: {
        std::vector<double>& eg = buffer(name, "mean_square_grad", n);
        std::vector<double>& ex = buffer(name, "mean_square_update", n);
        for (std::size_t i = 0; i < n; ++i) {
          const double g = grad(i);
          eg[i] = rho * eg[i] + (1.0 - rho) * g * g;
          const double dx = -std::sqrt(ex[i] + eps) / std::sqrt(eg[i] + eps) * g;
          ex[i] = rho * ex[i] + (1.0 - rho) * dx * dx;
          p.data[i] += lr * dx;
        }
        break;
      }
    }
  }
  prepared_ = false;
  ++t_;
}

}  // namespace cogtrans
