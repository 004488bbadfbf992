// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cogtrans/tensor.hpp"

namespace cogtrans {

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
struct Var {
  Graph* graph = nullptr;
  int id = -1;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool valid() const { return graph != nullptr; }
};

// Eager computation graph recorded during one forward pass. Nodes are kept in
// construction order, which is a topological order; backward walks it in
// reverse. A graph built with record_grad == false keeps no closures and is
// what inference uses.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, int self)>;

  explicit Graph(bool record_grad = true) : record_(record_grad) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Tensor value);
  // Leaf bound to a parameter. When p.requires_grad, backward adds into p.grad.
  Var param(Tensor& p);

  // Reverse-mode sweep from a scalar loss. Gradients of parameter leaves are
  // added to whatever the parameters already hold.
  void backward(Var loss);

  bool recording() const { return record_; }
  std::size_t size() const { return nodes_.size(); }
  const char* op_name(int id) const { return nodes_[id].op; }
  const std::vector<int>& inputs(int id) const { return nodes_[id].inputs; }
  const Tensor& value(int id) const { return nodes_[id].value; }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }

  // Used by op implementations.
  Var push(const char* op, std::vector<int> inputs, Tensor value, BackwardFn fn);
  // Gradient buffer of a node, allocated on first use; nullptr when the node
  // does not take part in differentiation.
  double* grad_buffer(int id);
  const std::vector<double>& grad(int id) const { return nodes_[id].grad; }

 private:
  struct Node {
    const char* op = "";
    std::vector<int> inputs;
    Tensor value;
    std::vector<double> grad;
    Tensor* param = nullptr;
    bool needs_grad = false;
    BackwardFn backward;
  };

  bool record_;
  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Differentiable operations. Matrices are row-major [rows, cols]; vectors are
// treated as single rows.

Var matmul(Var a, Var b);
// Elementwise; b may also be a [1, n] row broadcast over the rows of a.
Var add(Var a, Var b);
Var sub(Var a, Var b);
// Elementwise; b may be a [1, n] row or an [m, 1] column broadcast.
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);

Var sum(Var a);
Var mean(Var a);
Var dot(Var a, Var b);

// Row-wise softmax computed with max subtraction. When lengths is given,
// entries at column >= lengths[r] get probability zero.
Var softmax(Var a, std::span<const std::size_t> lengths = {});

Var concat_cols(std::span<const Var> parts);
Var slice_cols(Var a, std::size_t begin, std::size_t end);
Var concat_rows(std::span<const Var> parts);
// out[i] = a[indices[i]]; repeated indices accumulate in backward.
Var gather_rows(Var a, std::span<const std::size_t> indices);
// steps[t] is [n, d]; result row n * T + t holds steps[t] row n.
Var stack_time(std::span<const Var> steps);

// Row-wise layer normalisation with affine gain/bias ([1, n] each).
Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-6);

// Inverted dropout. Identity when !train or rate == 0.
Var dropout(Var x, double rate, bool train, Rng& rng);

// -ln(probs[target] + 1e-12) for a single probability vector.
Var cross_entropy(Var probs, std::size_t target);
inline constexpr double kLogFloor = 1e-12;

// sum_n weights[n] * -ln(softmax(logits[n])[targets[n]] + 1e-12).
Var softmax_cross_entropy(Var logits, std::span<const std::size_t> targets,
                          std::span<const double> weights);

// Additive attention energies. keys is [N * T, a] (row n * T + j), query is
// [N, a] (or invalid for a zero query), v is [1, a] or [a]. Returns [N, T]
// with e[n, j] = v . tanh(keys[n, j] + query[n]).
Var additive_scores(Var keys, Var query, Var v, std::size_t steps);
// alpha is [N, T], values is [N * T, d]; out[n] = sum_j alpha[n, j] values[n, j].
Var weighted_sum(Var alpha, Var values);

struct AttentionShape {
  std::size_t batch = 1;
  std::size_t query_len = 1;
  std::size_t key_len = 1;
  std::size_t heads = 1;
  bool causal = false;
};

// Scaled dot-product attention over per-example blocks and per-head column
// slices: for each example b and head h,
// softmax(Q_bh K_bh^T / sqrt(d_k)) V_bh. Q is [B * Tq, d], K and V are
// [B * Tk, d]. Keys at position >= key_lengths[b] are masked; with causal,
// query i only sees keys j <= i. When weights_out is non-null it receives one
// [Tq, Tk] matrix per example, averaged over heads.
Var scaled_dot_attention(Var q, Var k, Var v, const AttentionShape& shape,
                         std::span<const std::size_t> key_lengths,
                         std::vector<Tensor>* weights_out = nullptr);

}  // namespace cogtrans
