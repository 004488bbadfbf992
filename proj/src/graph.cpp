// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/graph.hpp"

#include "cogtrans/errors.hpp"

namespace cogtrans {

const Tensor& Var::value() const { return graph->value(id); }

Var Graph::constant(Tensor value) {
  value.requires_grad = false;
  value.grad.clear();
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Graph::param(Tensor& p) {
  Node n;
  n.op = "param";
  n.value.shape = p.shape;
  n.value.data = p.data;
  if (record_ && p.requires_grad) {
    n.param = &p;
    n.needs_grad = true;
  }
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Graph::push(const char* op, std::vector<int> inputs, Tensor value, BackwardFn fn) {
  Node n;
  n.op = op;
  n.value = std::move(value);
  if (record_) {
    for (int i : inputs) {
      if (nodes_[i].needs_grad) {
        n.needs_grad = true;
        break;
      }
    }
    if (n.needs_grad) n.backward = std::move(fn);
  }
  n.inputs = std::move(inputs);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

double* Graph::grad_buffer(int id) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return nullptr;
  if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
  return n.grad.data();
}

void Graph::backward(Var loss) {
  if (loss.graph != this) throw InvalidArgument("loss belongs to another graph");
  if (nodes_[loss.id].value.size() != 1) {
    throw InvalidShape("backward needs a scalar loss, got " +
                       shape_string(nodes_[loss.id].value.shape));
  }
  for (Node& n : nodes_) n.grad.clear();
  double* seed = grad_buffer(loss.id);
  if (seed == nullptr) return;
  seed[0] = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, i);
    if (n.param != nullptr) {
      Tensor& p = *n.param;
      if (p.grad.size() != p.data.size()) p.grad.assign(p.data.size(), 0.0);
      for (std::size_t k = 0; k < p.grad.size(); ++k) p.grad[k] += n.grad[k];
    }
  }
}

}  // namespace cogtrans
