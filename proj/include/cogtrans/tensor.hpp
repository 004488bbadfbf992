// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace cogtrans {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major buffer of doubles. A shape of {} is a scalar, {n} a vector
// and {r, c} a matrix; every graph op treats vectors as 1 x n rows.
struct Tensor {
  Shape shape;
  std::vector<double> data;
  bool requires_grad = false;
  // Empty until a backward pass writes into it; same length as data after.
  std::vector<double> grad;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0);
  Tensor(Shape s, std::vector<double> values);

  static Tensor scalar(double v) { return Tensor(Shape{}, std::vector<double>{v}); }
  static Tensor vector(std::initializer_list<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::initializer_list<double> values);

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.size() == 2 ? shape[0] : 1; }
  std::size_t cols() const { return shape.empty() ? 1 : shape.back(); }

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool has_grad() const { return !grad.empty(); }
  void zero_grad() { grad.clear(); }
};

using Rng = std::mt19937_64;

// Named trainable tensors. Iteration order is the sorted name order, which
// keeps checkpoints and optimizer state deterministic.
class ParamSet {
 public:
  using Map = std::map<std::string, Tensor>;

  Tensor& add(const std::string& name, Tensor t, bool trainable = true);
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return params_.count(name) != 0; }

  std::size_t count() const { return params_.size(); }
  std::size_t scalar_count() const;
  void zero_grad();

  Map::iterator begin() { return params_.begin(); }
  Map::iterator end() { return params_.end(); }
  Map::const_iterator begin() const { return params_.begin(); }
  Map::const_iterator end() const { return params_.end(); }

  // Copy with gradients stripped.
  ParamSet snapshot() const;
  bool same_layout(const ParamSet& other) const;

 private:
  Map params_;
};

// Initialisers used across the models.
Tensor uniform_tensor(Shape shape, double limit, Rng& rng);

}  // namespace cogtrans
