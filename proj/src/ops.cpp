// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "cogtrans/errors.hpp"
#include "cogtrans/graph.hpp"

namespace cogtrans {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

Graph& graph_of(Var a, Var b) {
  if (a.graph == nullptr || a.graph != b.graph) {
    throw InvalidArgument("operands belong to different graphs");
  }
  return *a.graph;
}

ConstMap as_matrix(const Tensor& t) { return ConstMap(t.data.data(), t.rows(), t.cols()); }

Shape matrix_shape(std::size_t r, std::size_t c) { return Shape{r, c}; }

std::string dims(const Tensor& t) { return shape_string(t.shape); }

bool is_row_broadcast(const Tensor& a, const Tensor& b) {
  return b.rows() == 1 && b.cols() == a.cols() && a.rows() > 1;
}

bool is_col_broadcast(const Tensor& a, const Tensor& b) {
  return b.cols() == 1 && b.rows() == a.rows() && a.cols() > 1;
}

template <typename F, typename D>
Var unary(Var a, const char* name, F f, D df_from_output) {
  const Tensor& x = a.value();
  Tensor out(x.shape);
  for (std::size_t i = 0; i < x.size(); ++i) out.data[i] = f(x.data[i]);
  int ia = a.id;
  return a.graph->push(name, {ia}, std::move(out), [ia, df_from_output](Graph& g, int self) {
    double* ga = g.grad_buffer(ia);
    if (!ga) return;
    const auto& gy = g.grad(self);
    const auto& y = g.value(self).data;
    for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * df_from_output(y[i]);
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  if (x.cols() != y.rows()) {
    throw InvalidShape("matmul " + dims(x) + " x " + dims(y));
  }
  Tensor out(matrix_shape(x.rows(), y.cols()));
  MutMap(out.data.data(), x.rows(), y.cols()).noalias() = as_matrix(x) * as_matrix(y);
  int ia = a.id, ib = b.id;
  return g.push("matmul", {ia, ib}, std::move(out), [ia, ib](Graph& g, int self) {
    const Tensor& x = g.value(ia);
    const Tensor& y = g.value(ib);
    ConstMap gy(g.grad(self).data(), x.rows(), y.cols());
    if (double* ga = g.grad_buffer(ia)) {
      MutMap(ga, x.rows(), x.cols()).noalias() += gy * as_matrix(y).transpose();
    }
    if (double* gb = g.grad_buffer(ib)) {
      MutMap(gb, y.rows(), y.cols()).noalias() += as_matrix(x).transpose() * gy;
    }
  });
}

Var add(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  Tensor out(x.shape, x.data);
  bool broadcast = false;
  if (x.shape == y.shape) {
    for (std::size_t i = 0; i < x.size(); ++i) out.data[i] += y.data[i];
  } else if (is_row_broadcast(x, y)) {
    broadcast = true;
    const std::size_t n = x.cols();
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < n; ++c) out.data[r * n + c] += y.data[c];
    }
  } else {
    throw InvalidShape("add " + dims(x) + " + " + dims(y));
  }
  int ia = a.id, ib = b.id;
  return g.push("add", {ia, ib}, std::move(out), [ia, ib, broadcast](Graph& g, int self) {
    const auto& gy = g.grad(self);
    if (double* ga = g.grad_buffer(ia)) {
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
    }
    if (double* gb = g.grad_buffer(ib)) {
      if (!broadcast) {
        for (std::size_t i = 0; i < gy.size(); ++i) gb[i] += gy[i];
      } else {
        const std::size_t n = g.value(ib).size();
        for (std::size_t i = 0; i < gy.size(); ++i) gb[i % n] += gy[i];
      }
    }
  });
}

Var sub(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  if (x.size() != y.size()) throw InvalidShape("sub " + dims(x) + " - " + dims(y));
  Tensor out(x.shape, x.data);
  for (std::size_t i = 0; i < x.size(); ++i) out.data[i] -= y.data[i];
  int ia = a.id, ib = b.id;
  return g.push("sub", {ia, ib}, std::move(out), [ia, ib](Graph& g, int self) {
    const auto& gy = g.grad(self);
    if (double* ga = g.grad_buffer(ia)) {
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
    }
    if (double* gb = g.grad_buffer(ib)) {
      for (std::size_t i = 0; i < gy.size(); ++i) gb[i] -= gy[i];
    }
  });
}

Var mul(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  enum class Mode { kSame, kRow, kCol } mode;
  if (x.shape == y.shape) {
    mode = Mode::kSame;
  } else if (is_row_broadcast(x, y)) {
    mode = Mode::kRow;
  } else if (is_col_broadcast(x, y)) {
    mode = Mode::kCol;
  } else {
    throw InvalidShape("mul " + dims(x) + " * " + dims(y));
  }
  const std::size_t cols = x.cols();
  auto bidx = [mode, cols](std::size_t i) -> std::size_t {
    switch (mode) {
      case Mode::kSame: return i;
      case Mode::kRow: return i % cols;
      case Mode::kCol: return i / cols;
    }
    return i;
  };
  Tensor out(x.shape);
  for (std::size_t i = 0; i < x.size(); ++i) out.data[i] = x.data[i] * y.data[bidx(i)];
  int ia = a.id, ib = b.id;
  return g.push("mul", {ia, ib}, std::move(out), [ia, ib, bidx](Graph& g, int self) {
    const auto& gy = g.grad(self);
    const auto& x = g.value(ia).data;
    const auto& y = g.value(ib).data;
    if (double* ga = g.grad_buffer(ia)) {
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * y[bidx(i)];
    }
    if (double* gb = g.grad_buffer(ib)) {
      for (std::size_t i = 0; i < gy.size(); ++i) gb[bidx(i)] += gy[i] * x[i];
    }
  });
}

Var scale(Var a, double s) {
  const Tensor& x = a.value();
  Tensor out(x.shape, x.data);
  for (double& v : out.data) v *= s;
  int ia = a.id;
  return a.graph->push("scale", {ia}, std::move(out), [ia, s](Graph& g, int self) {
    if (double* ga = g.grad_buffer(ia)) {
      const auto& gy = g.grad(self);
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += s * gy[i];
    }
  });
}

Var add_scalar(Var a, double s) {
  const Tensor& x = a.value();
  Tensor out(x.shape, x.data);
  for (double& v : out.data) v += s;
  int ia = a.id;
  return a.graph->push("add_scalar", {ia}, std::move(out), [ia](Graph& g, int self) {
    if (double* ga = g.grad_buffer(ia)) {
      const auto& gy = g.grad(self);
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
    }
  });
}

Var sigmoid(Var a) {
  return unary(
      a, "sigmoid",
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return unary(a, "tanh", [](double v) { return std::tanh(v); },
               [](double y) { return 1.0 - y * y; });
}

Var relu(Var a) {
  return unary(a, "relu", [](double v) { return v > 0 ? v : 0.0; },
               [](double y) { return y > 0 ? 1.0 : 0.0; });
}

Var sum(Var a) {
  const Tensor& x = a.value();
  double s = 0;
  for (double v : x.data) s += v;
  int ia = a.id;
  return a.graph->push("sum", {ia}, Tensor::scalar(s), [ia](Graph& g, int self) {
    if (double* ga = g.grad_buffer(ia)) {
      const double gy = g.grad(self)[0];
      const std::size_t n = g.value(ia).size();
      for (std::size_t i = 0; i < n; ++i) ga[i] += gy;
    }
  });
}

Var mean(Var a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw InvalidShape("mean of empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var dot(Var a, Var b) {
  if (a.value().size() != b.value().size()) {
    throw InvalidShape("dot " + dims(a.value()) + " . " + dims(b.value()));
  }
  return sum(mul(a, b));
}

Var softmax(Var a, std::span<const std::size_t> lengths) {
  const Tensor& x = a.value();
  const std::size_t rows = x.rows(), cols = x.cols();
  if (x.size() == 0 || cols == 0) throw InvalidShape("softmax of an empty vector");
  if (!lengths.empty() && lengths.size() != rows) {
    throw InvalidShape("softmax lengths do not match rows");
  }
  Tensor out(x.shape);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t len = lengths.empty() ? cols : std::min(lengths[r], cols);
    if (len == 0) throw InvalidShape("softmax row with no valid entries");
    const double* in = &x.data[r * cols];
    double* o = &out.data[r * cols];
    double mx = in[0];
    for (std::size_t c = 1; c < len; ++c) mx = std::max(mx, in[c]);
    double z = 0;
    for (std::size_t c = 0; c < len; ++c) {
      o[c] = std::exp(in[c] - mx);
      z += o[c];
    }
    for (std::size_t c = 0; c < len; ++c) o[c] /= z;
  }
  int ia = a.id;
  return a.graph->push("softmax", {ia}, std::move(out), [ia, rows, cols](Graph& g, int self) {
    double* ga = g.grad_buffer(ia);
    if (!ga) return;
    const auto& gy = g.grad(self);
    const auto& p = g.value(self).data;
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0;
      for (std::size_t c = 0; c < cols; ++c) s += gy[r * cols + c] * p[r * cols + c];
      for (std::size_t c = 0; c < cols; ++c) {
        ga[r * cols + c] += p[r * cols + c] * (gy[r * cols + c] - s);
      }
    }
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidShape("concat of nothing");
  Graph& g = *parts[0].graph;
  const std::size_t rows = parts[0].rows();
  std::size_t total = 0;
  std::vector<int> ids;
  std::vector<std::size_t> widths;
  for (const Var& p : parts) {
    if (p.graph != &g) throw InvalidArgument("operands belong to different graphs");
    if (p.rows() != rows) throw InvalidShape("concat_cols row mismatch");
    ids.push_back(p.id);
    widths.push_back(p.cols());
    total += p.cols();
  }
  Tensor out(matrix_shape(rows, total));
  std::size_t off = 0;
  for (const Var& p : parts) {
    const Tensor& t = p.value();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(&t.data[r * t.cols()], t.cols(), &out.data[r * total + off]);
    }
    off += t.cols();
  }
  return g.push("concat_cols", ids, std::move(out),
                [ids, widths, rows, total](Graph& g, int self) {
                  const auto& gy = g.grad(self);
                  std::size_t off = 0;
                  for (std::size_t k = 0; k < ids.size(); ++k) {
                    if (double* gp = g.grad_buffer(ids[k])) {
                      for (std::size_t r = 0; r < rows; ++r) {
                        for (std::size_t c = 0; c < widths[k]; ++c) {
                          gp[r * widths[k] + c] += gy[r * total + off + c];
                        }
                      }
                    }
                    off += widths[k];
                  }
                });
}

Var slice_cols(Var a, std::size_t begin, std::size_t end) {
  const Tensor& x = a.value();
  if (begin >= end || end > x.cols()) throw InvalidShape("slice_cols out of range");
  const std::size_t rows = x.rows(), cols = x.cols(), w = end - begin;
  Tensor out(matrix_shape(rows, w));
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(&x.data[r * cols + begin], w, &out.data[r * w]);
  }
  int ia = a.id;
  return a.graph->push("slice_cols", {ia}, std::move(out),
                       [ia, rows, cols, begin, w](Graph& g, int self) {
                         double* ga = g.grad_buffer(ia);
                         if (!ga) return;
                         const auto& gy = g.grad(self);
                         for (std::size_t r = 0; r < rows; ++r) {
                           for (std::size_t c = 0; c < w; ++c) {
                             ga[r * cols + begin + c] += gy[r * w + c];
                           }
                         }
                       });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidShape("concat of nothing");
  Graph& g = *parts[0].graph;
  const std::size_t cols = parts[0].cols();
  std::size_t total = 0;
  std::vector<int> ids;
  for (const Var& p : parts) {
    if (p.graph != &g) throw InvalidArgument("operands belong to different graphs");
    if (p.cols() != cols) throw InvalidShape("concat_rows column mismatch");
    ids.push_back(p.id);
    total += p.rows();
  }
  Tensor out(matrix_shape(total, cols));
  std::size_t off = 0;
  for (const Var& p : parts) {
    const Tensor& t = p.value();
    std::copy(t.data.begin(), t.data.end(), out.data.begin() + off);
    off += t.size();
  }
  return g.push("concat_rows", ids, std::move(out), [ids](Graph& g, int self) {
    const auto& gy = g.grad(self);
    std::size_t off = 0;
    for (int id : ids) {
      const std::size_t n = g.value(id).size();
      if (double* gp = g.grad_buffer(id)) {
        for (std::size_t i = 0; i < n; ++i) gp[i] += gy[off + i];
      }
      off += n;
    }
  });
}

Var gather_rows(Var a, std::span<const std::size_t> indices) {
  const Tensor& x = a.value();
  const std::size_t cols = x.cols();
  Tensor out(matrix_shape(indices.size(), cols));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= x.rows()) {
      throw IndexError("row " + std::to_string(indices[i]) + " out of " +
                       std::to_string(x.rows()));
    }
    std::copy_n(&x.data[indices[i] * cols], cols, &out.data[i * cols]);
  }
  int ia = a.id;
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return a.graph->push("gather_rows", {ia}, std::move(out),
                       [ia, idx = std::move(idx), cols](Graph& g, int self) {
                         double* ga = g.grad_buffer(ia);
                         if (!ga) return;
                         const auto& gy = g.grad(self);
                         for (std::size_t i = 0; i < idx.size(); ++i) {
                           for (std::size_t c = 0; c < cols; ++c) {
                             ga[idx[i] * cols + c] += gy[i * cols + c];
                           }
                         }
                       });
}

Var stack_time(std::span<const Var> steps) {
  if (steps.empty()) throw EmptyInput("stack_time of an empty sequence");
  Graph& g = *steps[0].graph;
  const std::size_t n = steps[0].rows(), d = steps[0].cols(), T = steps.size();
  std::vector<int> ids;
  for (const Var& s : steps) {
    if (s.rows() != n || s.cols() != d) throw InvalidShape("stack_time step mismatch");
    ids.push_back(s.id);
  }
  Tensor out(matrix_shape(n * T, d));
  for (std::size_t t = 0; t < T; ++t) {
    const Tensor& s = steps[t].value();
    for (std::size_t r = 0; r < n; ++r) {
      std::copy_n(&s.data[r * d], d, &out.data[(r * T + t) * d]);
    }
  }
  return g.push("stack_time", ids, std::move(out), [ids, n, d](Graph& g, int self) {
    const auto& gy = g.grad(self);
    const std::size_t T = ids.size();
    for (std::size_t t = 0; t < T; ++t) {
      double* gs = g.grad_buffer(ids[t]);
      if (!gs) continue;
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) gs[r * d + c] += gy[(r * T + t) * d + c];
      }
    }
  });
}

Var layer_norm(Var x, Var gain, Var bias, double eps) {
  Graph& g = graph_of(x, gain);
  graph_of(x, bias);
  const Tensor& in = x.value();
  const std::size_t rows = in.rows(), n = in.cols();
  if (gain.value().size() != n || bias.value().size() != n) {
    throw InvalidShape("layer_norm gain/bias " + dims(gain.value()) + " vs input " + dims(in));
  }
  auto xhat = std::make_shared<std::vector<double>>(in.size());
  auto inv = std::make_shared<std::vector<double>>(rows);
  Tensor out(in.shape);
  const auto& ga = gain.value().data;
  const auto& be = bias.value().data;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* v = &in.data[r * n];
    double mu = 0;
    for (std::size_t c = 0; c < n; ++c) mu += v[c];
    mu /= static_cast<double>(n);
    double var = 0;
    for (std::size_t c = 0; c < n; ++c) var += (v[c] - mu) * (v[c] - mu);
    var /= static_cast<double>(n);
    const double s = 1.0 / std::sqrt(var + eps);
    (*inv)[r] = s;
    for (std::size_t c = 0; c < n; ++c) {
      const double h = (v[c] - mu) * s;
      (*xhat)[r * n + c] = h;
      out.data[r * n + c] = ga[c] * h + be[c];
    }
  }
  int ix = x.id, ig = gain.id, ib = bias.id;
  return g.push("layer_norm", {ix, ig, ib}, std::move(out),
                [ix, ig, ib, xhat, inv, rows, n](Graph& g, int self) {
                  const auto& gy = g.grad(self);
                  const auto& gain = g.value(ig).data;
                  if (double* gg = g.grad_buffer(ig)) {
                    for (std::size_t i = 0; i < gy.size(); ++i) gg[i % n] += gy[i] * (*xhat)[i];
                  }
                  if (double* gb = g.grad_buffer(ib)) {
                    for (std::size_t i = 0; i < gy.size(); ++i) gb[i % n] += gy[i];
                  }
                  double* gx = g.grad_buffer(ix);
                  if (!gx) return;
                  const double dn = static_cast<double>(n);
                  for (std::size_t r = 0; r < rows; ++r) {
                    double s1 = 0, s2 = 0;
                    for (std::size_t c = 0; c < n; ++c) {
                      const double dh = gy[r * n + c] * gain[c];
                      s1 += dh;
                      s2 += dh * (*xhat)[r * n + c];
                    }
                    for (std::size_t c = 0; c < n; ++c) {
                      const double dh = gy[r * n + c] * gain[c];
                      gx[r * n + c] +=
                          (*inv)[r] / dn * (dn * dh - s1 - (*xhat)[r * n + c] * s2);
                    }
                  }
                });
}

Var dropout(Var x, double rate, bool train, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) {
    throw InvalidArgument("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!train || rate == 0.0) return x;
  const Tensor& in = x.value();
  Tensor mask(in.shape);
  std::bernoulli_distribution keep(1.0 - rate);
  const double kept = 1.0 / (1.0 - rate);
  for (double& m : mask.data) m = keep(rng) ? kept : 0.0;
  return mul(x, x.graph->constant(std::move(mask)));
}

Var cross_entropy(Var probs, std::size_t target) {
  const Tensor& p = probs.value();
  if (target >= p.size()) {
    throw IndexError("target " + std::to_string(target) + " out of " + std::to_string(p.size()));
  }
  const double pt = p.data[target];
  int ip = probs.id;
  return probs.graph->push("cross_entropy", {ip}, Tensor::scalar(-std::log(pt + kLogFloor)),
                           [ip, target](Graph& g, int self) {
                             if (double* gp = g.grad_buffer(ip)) {
                               const double pt = g.value(ip).data[target];
                               gp[target] += -g.grad(self)[0] / (pt + kLogFloor);
                             }
                           });
}

Var softmax_cross_entropy(Var logits, std::span<const std::size_t> targets,
                          std::span<const double> weights) {
  const Tensor& z = logits.value();
  const std::size_t rows = z.rows(), cols = z.cols();
  if (targets.size() != rows || weights.size() != rows) {
    throw InvalidShape("softmax_cross_entropy: targets/weights do not match logits rows");
  }
  auto probs = std::make_shared<std::vector<double>>(z.size());
  double loss = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (targets[r] >= cols) throw IndexError("target id out of vocabulary");
    const double* in = &z.data[r * cols];
    double* p = &(*probs)[r * cols];
    double mx = in[0];
    for (std::size_t c = 1; c < cols; ++c) mx = std::max(mx, in[c]);
    double s = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      p[c] = std::exp(in[c] - mx);
      s += p[c];
    }
    for (std::size_t c = 0; c < cols; ++c) p[c] /= s;
    if (weights[r] != 0.0) loss += weights[r] * -std::log(p[targets[r]] + kLogFloor);
  }
  std::vector<std::size_t> tg(targets.begin(), targets.end());
  std::vector<double> wt(weights.begin(), weights.end());
  int iz = logits.id;
  return logits.graph->push(
      "softmax_cross_entropy", {iz}, Tensor::scalar(loss),
      [iz, probs, tg = std::move(tg), wt = std::move(wt), rows, cols](Graph& g, int self) {
        double* gz = g.grad_buffer(iz);
        if (!gz) return;
        const double gy = g.grad(self)[0];
        for (std::size_t r = 0; r < rows; ++r) {
          if (wt[r] == 0.0) continue;
          const double* p = &(*probs)[r * cols];
          const double pt = p[tg[r]];
          const double k = gy * wt[r] * pt / (pt + kLogFloor);
          for (std::size_t c = 0; c < cols; ++c) {
            gz[r * cols + c] += k * (p[c] - (c == tg[r] ? 1.0 : 0.0));
          }
        }
      });
}

Var additive_scores(Var keys, Var query, Var v, std::size_t steps) {
  Graph& g = *keys.graph;
  const Tensor& K = keys.value();
  const std::size_t a = K.cols();
  if (steps == 0 || K.rows() % steps != 0) throw InvalidShape("additive_scores: bad step count");
  const std::size_t n = K.rows() / steps;
  if (v.value().size() != a) throw InvalidShape("additive_scores: v has wrong width");
  const bool has_query = query.valid();
  if (has_query && (query.rows() != n || query.cols() != a)) {
    throw InvalidShape("additive_scores: query " + dims(query.value()) + " vs keys " + dims(K));
  }
  auto u = std::make_shared<std::vector<double>>(K.size());
  Tensor out(matrix_shape(n, steps));
  const auto& vv = v.value().data;
  for (std::size_t r = 0; r < n; ++r) {
    const double* q = has_query ? &query.value().data[r * a] : nullptr;
    for (std::size_t j = 0; j < steps; ++j) {
      const std::size_t row = r * steps + j;
      double e = 0;
      for (std::size_t c = 0; c < a; ++c) {
        const double h = std::tanh(K.data[row * a + c] + (q ? q[c] : 0.0));
        (*u)[row * a + c] = h;
        e += vv[c] * h;
      }
      out.data[r * steps + j] = e;
    }
  }
  std::vector<int> ids{keys.id, v.id};
  if (has_query) ids.push_back(query.id);
  int ik = keys.id, iv = v.id, iq = has_query ? query.id : -1;
  return g.push("additive_scores", ids, std::move(out),
                [ik, iv, iq, u, n, steps, a](Graph& g, int self) {
                  const auto& gy = g.grad(self);
                  const auto& vv = g.value(iv).data;
                  double* gk = g.grad_buffer(ik);
                  double* gv = g.grad_buffer(iv);
                  double* gq = iq >= 0 ? g.grad_buffer(iq) : nullptr;
                  for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t j = 0; j < steps; ++j) {
                      const std::size_t row = r * steps + j;
                      const double ge = gy[r * steps + j];
                      if (ge == 0.0) continue;
                      for (std::size_t c = 0; c < a; ++c) {
                        const double h = (*u)[row * a + c];
                        if (gv) gv[c] += ge * h;
                        const double pre = ge * vv[c] * (1.0 - h * h);
                        if (gk) gk[row * a + c] += pre;
                        if (gq) gq[r * a + c] += pre;
                      }
                    }
                  }
                });
}

Var weighted_sum(Var alpha, Var values) {
  Graph& g = graph_of(alpha, values);
  const Tensor& A = alpha.value();
  const Tensor& V = values.value();
  const std::size_t n = A.rows(), steps = A.cols(), d = V.cols();
  if (V.rows() != n * steps) {
    throw InvalidShape("weighted_sum: alpha " + dims(A) + " vs values " + dims(V));
  }
  Tensor out(matrix_shape(n, d));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < steps; ++j) {
      const double w = A.data[r * steps + j];
      if (w == 0.0) continue;
      const double* src = &V.data[(r * steps + j) * d];
      double* dst = &out.data[r * d];
      for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
    }
  }
  int ia = alpha.id, iv = values.id;
  return g.push("weighted_sum", {ia, iv}, std::move(out),
                [ia, iv, n, steps, d](Graph& g, int self) {
                  const auto& gy = g.grad(self);
                  const auto& A = g.value(ia).data;
                  const auto& V = g.value(iv).data;
                  double* ga = g.grad_buffer(ia);
                  double* gv = g.grad_buffer(iv);
                  for (std::size_t r = 0; r < n; ++r) {
                    const double* go = &gy[r * d];
                    for (std::size_t j = 0; j < steps; ++j) {
                      const std::size_t row = r * steps + j;
                      if (ga) {
                        double s = 0;
                        for (std::size_t c = 0; c < d; ++c) s += go[c] * V[row * d + c];
                        ga[r * steps + j] += s;
                      }
                      if (gv) {
                        const double w = A[r * steps + j];
                        for (std::size_t c = 0; c < d; ++c) gv[row * d + c] += w * go[c];
                      }
                    }
                  }
                });
}

Var scaled_dot_attention(Var q, Var k, Var v, const AttentionShape& shape,
                         std::span<const std::size_t> key_lengths,
                         std::vector<Tensor>* weights_out) {
  Graph& g = graph_of(q, k);
  graph_of(q, v);
  const Tensor& Q = q.value();
  const Tensor& K = k.value();
  const Tensor& V = v.value();
  const std::size_t B = shape.batch, Tq = shape.query_len, Tk = shape.key_len;
  const std::size_t H = shape.heads, d = Q.cols();
  if (H == 0 || d % H != 0) {
    throw InvalidArgument("model width " + std::to_string(d) + " not divisible by " +
                          std::to_string(H) + " heads");
  }
  if (Q.rows() != B * Tq || K.rows() != B * Tk || V.rows() != B * Tk || K.cols() != d ||
      V.cols() != d) {
    throw InvalidShape("attention shapes Q" + dims(Q) + " K" + dims(K) + " V" + dims(V));
  }
  if (!key_lengths.empty() && key_lengths.size() != B) {
    throw InvalidShape("attention key_lengths do not match batch");
  }
  const std::size_t dk = d / H;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dk));
  ConstMap Qm = as_matrix(Q), Km = as_matrix(K), Vm = as_matrix(V);
  auto probs = std::make_shared<std::vector<RowMat>>(B * H);
  Tensor out(matrix_shape(B * Tq, d));
  MutMap Om(out.data.data(), B * Tq, d);
  if (weights_out) {
    weights_out->assign(B, Tensor(matrix_shape(Tq, Tk)));
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < B; ++b) {
    const std::size_t len = key_lengths.empty() ? Tk : std::min(key_lengths[b], Tk);
    if (len == 0) throw InvalidShape("attention over zero keys");
    for (std::size_t h = 0; h < H; ++h) {
      RowMat S = Qm.block(b * Tq, h * dk, Tq, dk) * Km.block(b * Tk, h * dk, Tk, dk).transpose();
      S *= inv_sqrt;
      for (std::size_t i = 0; i < Tq; ++i) {
        const std::size_t visible = shape.causal ? std::min(len, i + 1) : len;
        double mx = neg_inf;
        for (std::size_t j = 0; j < visible; ++j) mx = std::max(mx, S(i, j));
        double z = 0;
        for (std::size_t j = 0; j < Tk; ++j) {
          if (j < visible) {
            S(i, j) = std::exp(S(i, j) - mx);
            z += S(i, j);
          } else {
            S(i, j) = 0.0;
          }
        }
        for (std::size_t j = 0; j < visible; ++j) S(i, j) /= z;
      }
      Om.block(b * Tq, h * dk, Tq, dk).noalias() = S * Vm.block(b * Tk, h * dk, Tk, dk);
      if (weights_out) {
        Tensor& w = (*weights_out)[b];
        for (std::size_t i = 0; i < Tq; ++i) {
          for (std::size_t j = 0; j < Tk; ++j) w(i, j) += S(i, j) / static_cast<double>(H);
        }
      }
      (*probs)[b * H + h] = std::move(S);
    }
  }
  int iq = q.id, ik = k.id, iv = v.id;
  return g.push(
      "scaled_dot_attention", {iq, ik, iv}, std::move(out),
      [iq, ik, iv, probs, B, Tq, Tk, H, dk, d, inv_sqrt](Graph& g, int self) {
        ConstMap Qm = as_matrix(g.value(iq));
        ConstMap Km = as_matrix(g.value(ik));
        ConstMap Vm = as_matrix(g.value(iv));
        ConstMap dO(g.grad(self).data(), B * Tq, d);
        double* gq = g.grad_buffer(iq);
        double* gk = g.grad_buffer(ik);
        double* gv = g.grad_buffer(iv);
        for (std::size_t b = 0; b < B; ++b) {
          for (std::size_t h = 0; h < H; ++h) {
            const RowMat& P = (*probs)[b * H + h];
            auto dOb = dO.block(b * Tq, h * dk, Tq, dk);
            if (gv) {
              MutMap(gv, B * Tk, d).block(b * Tk, h * dk, Tk, dk).noalias() +=
                  P.transpose() * dOb;
            }
            if (!gq && !gk) continue;
            RowMat dP = dOb * Vm.block(b * Tk, h * dk, Tk, dk).transpose();
            RowMat dS(Tq, Tk);
            for (std::size_t i = 0; i < Tq; ++i) {
              double s = 0;
              for (std::size_t j = 0; j < Tk; ++j) s += dP(i, j) * P(i, j);
              for (std::size_t j = 0; j < Tk; ++j) dS(i, j) = P(i, j) * (dP(i, j) - s) * inv_sqrt;
            }
            if (gq) {
              MutMap(gq, B * Tq, d).block(b * Tq, h * dk, Tq, dk).noalias() +=
                  dS * Km.block(b * Tk, h * dk, Tk, dk);
            }
            if (gk) {
              MutMap(gk, B * Tk, d).block(b * Tk, h * dk, Tk, dk).noalias() +=
                  dS.transpose() * Qm.block(b * Tq, h * dk, Tq, dk);
            }
          }
        }
      });
}

}  // namespace cogtrans
