// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cogtrans/graph.hpp"

namespace cogtrans {

enum class CellKind { kLstm, kGru };

const char* cell_kind_name(CellKind kind);
CellKind parse_cell_kind(const std::string& name);

// Names and sizes of one recurrent cell's weights inside a ParamSet.
// LSTM: <prefix>.W is [(in + hid), 4 * hid] with gate blocks i, f, g, o and
// <prefix>.b is [1, 4 * hid]. GRU: <prefix>.W is [(in + hid), 2 * hid] for the
// update and reset gates, <prefix>.Wc / <prefix>.bc the candidate.
struct CellParams {
  CellKind kind = CellKind::kLstm;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::string prefix;
};

inline constexpr double kInitRange = 0.08;

// Registers the cell's tensors: uniform(-init_range, init_range) weights,
// zero biases and a forget-gate bias of +1 for LSTMs.
CellParams add_cell(ParamSet& params, const std::string& prefix, CellKind kind,
                    std::size_t input_dim, std::size_t hidden_dim, Rng& rng,
                    double init_range = kInitRange);

struct BoundCell {
  CellParams spec;
  Var w, b, w_cand, b_cand;
};

BoundCell bind_cell(Graph& g, ParamSet& params, const CellParams& spec);

struct LstmOutput {
  Var h;
  Var c;
};

// c' = f * c + i * g, h' = o * tanh(c').
LstmOutput lstm_step(Var x, Var h, Var c, const BoundCell& p);
// h' = z * h + (1 - z) * tanh([x, r * h] Wc + bc).
Var gru_step(Var x, Var h, const BoundCell& p);

struct RecurrentState {
  Var h;
  Var c;  // unused by GRUs
};

RecurrentState initial_state(Graph& g, const CellParams& spec, std::size_t batch);
RecurrentState cell_step(const BoundCell& p, Var x, const RecurrentState& s);

// Keeps the old state where mask is 0 ([N, 1] of 0/1).
RecurrentState masked_update(const RecurrentState& old_state, const RecurrentState& new_state,
                             Var mask, bool has_cell);

struct BiEncoding {
  std::vector<Var> states;  // one [N, 2 * hid] per step, forward || backward
  Var final_state;          // last forward state || first backward state
};

// Runs fwd left to right and bwd right to left over seq. masks, when given,
// hold one [N, 1] validity column per step; padded steps leave the state
// untouched so right padding never reaches the backward direction.
BiEncoding bidirectional_encode(std::span<const Var> seq, const BoundCell& fwd,
                                const BoundCell& bwd, std::span<const Var> masks = {});

struct EmbeddingTable {
  Tensor table;  // [vocab, dim]
  bool trainable = true;
};

Var embed(Var table, std::span<const std::size_t> ids);

}  // namespace cogtrans
