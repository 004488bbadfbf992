// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/cells.hpp"

#include <array>

#include "cogtrans/errors.hpp"

namespace cogtrans {

const char* cell_kind_name(CellKind kind) { return kind == CellKind::kLstm ? "lstm" : "gru"; }

CellKind parse_cell_kind(const std::string& name) {
  if (name == "lstm" || name == "LSTM") return CellKind::kLstm;
  if (name == "gru" || name == "GRU") return CellKind::kGru;
  throw InvalidArgument("unknown cell kind '" + name + "'");
}

CellParams add_cell(ParamSet& params, const std::string& prefix, CellKind kind,
                    std::size_t input_dim, std::size_t hidden_dim, Rng& rng,
                    double init_range) {
  if (input_dim == 0 || hidden_dim == 0) throw InvalidArgument("cell dimensions must be positive");
  const std::size_t rows = input_dim + hidden_dim;
  if (kind == CellKind::kLstm) {
    params.add(prefix + ".W", uniform_tensor({rows, 4 * hidden_dim}, init_range, rng));
    Tensor b({1, 4 * hidden_dim});
    for (std::size_t k = hidden_dim; k < 2 * hidden_dim; ++k) b.data[k] = 1.0;
    params.add(prefix + ".b", std::move(b));
  } else {
    params.add(prefix + ".W", uniform_tensor({rows, 2 * hidden_dim}, init_range, rng));
    params.add(prefix + ".b", Tensor({1, 2 * hidden_dim}));
    params.add(prefix + ".Wc", uniform_tensor({rows, hidden_dim}, init_range, rng));
    params.add(prefix + ".bc", Tensor({1, hidden_dim}));
  }
  return CellParams{kind, input_dim, hidden_dim, prefix};
}

BoundCell bind_cell(Graph& g, ParamSet& params, const CellParams& spec) {
  BoundCell c;
  c.spec = spec;
  c.w = g.param(params.at(spec.prefix + ".W"));
  c.b = g.param(params.at(spec.prefix + ".b"));
  if (spec.kind == CellKind::kGru) {
    c.w_cand = g.param(params.at(spec.prefix + ".Wc"));
    c.b_cand = g.param(params.at(spec.prefix + ".bc"));
  }
  return c;
}

namespace {

void check_dims(Var x, Var h, const CellParams& spec) {
  if (x.cols() != spec.input_dim || h.cols() != spec.hidden_dim || x.rows() != h.rows()) {
    throw InvalidShape("cell " + spec.prefix + " expects input " +
                       std::to_string(spec.input_dim) + " / hidden " +
                       std::to_string(spec.hidden_dim) + ", got " +
                       shape_string(x.value().shape) + " / " + shape_string(h.value().shape));
  }
}

}  // namespace

LstmOutput lstm_step(Var x, Var h, Var c, const BoundCell& p) {
  if (p.spec.kind != CellKind::kLstm) throw InvalidArgument("lstm_step on a GRU cell");
  check_dims(x, h, p.spec);
  if (c.cols() != p.spec.hidden_dim || c.rows() != h.rows()) {
    throw InvalidShape("lstm_step: cell state has wrong shape");
  }
  const std::size_t H = p.spec.hidden_dim;
  std::array<Var, 2> xh{x, h};
  Var z = add(matmul(concat_cols(xh), p.w), p.b);
  Var i = sigmoid(slice_cols(z, 0, H));
  Var f = sigmoid(slice_cols(z, H, 2 * H));
  Var gg = tanh(slice_cols(z, 2 * H, 3 * H));
  Var o = sigmoid(slice_cols(z, 3 * H, 4 * H));
  Var c_next = add(mul(f, c), mul(i, gg));
  Var h_next = mul(o, tanh(c_next));
  return {h_next, c_next};
}

Var gru_step(Var x, Var h, const BoundCell& p) {
  if (p.spec.kind != CellKind::kGru) throw InvalidArgument("gru_step on an LSTM cell");
  check_dims(x, h, p.spec);
  const std::size_t H = p.spec.hidden_dim;
  std::array<Var, 2> xh{x, h};
  Var zr = sigmoid(add(matmul(concat_cols(xh), p.w), p.b));
  Var z = slice_cols(zr, 0, H);
  Var r = slice_cols(zr, H, 2 * H);
  std::array<Var, 2> xrh{x, mul(r, h)};
  Var cand = tanh(add(matmul(concat_cols(xrh), p.w_cand), p.b_cand));
  return add(cand, mul(z, sub(h, cand)));
}

RecurrentState initial_state(Graph& g, const CellParams& spec, std::size_t batch) {
  RecurrentState s;
  s.h = g.constant(Tensor({batch, spec.hidden_dim}));
  if (spec.kind == CellKind::kLstm) s.c = g.constant(Tensor({batch, spec.hidden_dim}));
  return s;
}

RecurrentState cell_step(const BoundCell& p, Var x, const RecurrentState& s) {
  if (p.spec.kind == CellKind::kLstm) {
    LstmOutput o = lstm_step(x, s.h, s.c, p);
    return {o.h, o.c};
  }
  return {gru_step(x, s.h, p), Var{}};
}

RecurrentState masked_update(const RecurrentState& old_state, const RecurrentState& new_state,
                             Var mask, bool has_cell) {
  RecurrentState out;
  out.h = add(old_state.h, mul(sub(new_state.h, old_state.h), mask));
  if (has_cell) out.c = add(old_state.c, mul(sub(new_state.c, old_state.c), mask));
  return out;
}

BiEncoding bidirectional_encode(std::span<const Var> seq, const BoundCell& fwd,
                                const BoundCell& bwd, std::span<const Var> masks) {
  if (seq.empty()) throw EmptyInput("bidirectional_encode on an empty sequence");
  if (!masks.empty() && masks.size() != seq.size()) {
    throw InvalidShape("bidirectional_encode: one mask per step required");
  }
  Graph& g = *seq[0].graph;
  const std::size_t T = seq.size(), N = seq[0].rows();
  const bool fwd_cell = fwd.spec.kind == CellKind::kLstm;
  const bool bwd_cell = bwd.spec.kind == CellKind::kLstm;

  std::vector<Var> f_states(T), b_states(T);
  RecurrentState s = initial_state(g, fwd.spec, N);
  for (std::size_t t = 0; t < T; ++t) {
    RecurrentState next = cell_step(fwd, seq[t], s);
    s = masks.empty() ? next : masked_update(s, next, masks[t], fwd_cell);
    f_states[t] = s.h;
  }
  Var last_fwd = s.h;
  s = initial_state(g, bwd.spec, N);
  for (std::size_t k = T; k-- > 0;) {
    RecurrentState next = cell_step(bwd, seq[k], s);
    s = masks.empty() ? next : masked_update(s, next, masks[k], bwd_cell);
    b_states[k] = s.h;
  }

  BiEncoding out;
  out.states.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    std::array<Var, 2> both{f_states[t], b_states[t]};
    out.states.push_back(concat_cols(both));
  }
  std::array<Var, 2> fin{last_fwd, b_states[0]};
  out.final_state = concat_cols(fin);
  return out;
}

Var embed(Var table, std::span<const std::size_t> ids) { return gather_rows(table, ids); }

}  // namespace cogtrans
