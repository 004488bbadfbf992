// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/tensor.hpp"

#include <numeric>
#include <sstream>

#include "cogtrans/errors.hpp"

namespace cogtrans {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape s, double fill) : shape(std::move(s)), data(shape_size(shape), fill) {}

Tensor::Tensor(Shape s, std::vector<double> values) : shape(std::move(s)), data(std::move(values)) {
  if (shape_size(shape) != data.size()) {
    throw InvalidShape("tensor shape " + shape_string(shape) + " does not match " +
                       std::to_string(data.size()) + " values");
  }
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  return Tensor(Shape{values.size()}, std::vector<double>(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::initializer_list<double> values) {
  return Tensor(Shape{rows, cols}, std::vector<double>(values));
}

Tensor& ParamSet::add(const std::string& name, Tensor t, bool trainable) {
  if (params_.count(name)) throw InvalidArgument("duplicate parameter '" + name + "'");
  t.requires_grad = trainable;
  t.grad.clear();
  return params_.emplace(name, std::move(t)).first->second;
}

Tensor& ParamSet::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw IndexError("unknown parameter '" + name + "'");
  return it->second;
}

const Tensor& ParamSet::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw IndexError("unknown parameter '" + name + "'");
  return it->second;
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.size();
  return n;
}

void ParamSet::zero_grad() {
  for (auto& [name, t] : params_) t.zero_grad();
}

ParamSet ParamSet::snapshot() const {
  ParamSet out;
  for (const auto& [name, t] : params_) {
    Tensor copy(t.shape, t.data);
    copy.requires_grad = t.requires_grad;
    out.params_.emplace(name, std::move(copy));
  }
  return out;
}

bool ParamSet::same_layout(const ParamSet& other) const {
  if (params_.size() != other.params_.size()) return false;
  auto a = params_.begin();
  auto b = other.params_.begin();
  for (; a != params_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.shape != b->second.shape) return false;
  }
  return true;
}

Tensor uniform_tensor(Shape shape, double limit, Rng& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : t.data) v = dist(rng);
  return t;
}

}  // namespace cogtrans
