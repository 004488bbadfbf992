// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>

#include "cogtrans/errors.hpp"
#include "model_impl.hpp"

namespace cogtrans::detail {
namespace {

std::string layer_name(const char* base, std::size_t l, const char* dir = nullptr) {
  std::string n = std::string(base) + ".l" + std::to_string(l);
  if (dir) n += std::string(".") + dir;
  return n;
}

Tensor mask_column(std::span<const std::size_t> lengths, std::size_t t) {
  Tensor m({lengths.size(), 1});
  for (std::size_t b = 0; b < lengths.size(); ++b) m.data[b] = t < lengths[b] ? 1.0 : 0.0;
  return m;
}

std::size_t argmax_row(const Tensor& t, std::size_t r) {
  const double* row = &t.data[r * t.cols()];
  return static_cast<std::size_t>(std::max_element(row, row + t.cols()) - row);
}

}  // namespace

struct RnnModel::Bound {
  Var enc_embed, dec_embed;
  std::vector<std::pair<BoundCell, BoundCell>> enc_layers;
  BoundCell char_fwd, char_bwd;
  Var char_att_w, char_att_b, char_att_u;
  AdditiveAttentionParams att;
  Var init_w, init_b;
  std::vector<BoundCell> dec_layers;
  Var out_w, out_b;
};

RnnModel::RnnModel(ModelConfig cfg, CharVocab vocab)
    : TransductionModel(std::move(cfg), std::move(vocab)) {}

std::size_t RnnModel::attention_dim() const {
  return cfg_.attention_dim ? cfg_.attention_dim : cfg_.hidden_dim;
}

void RnnModel::init(Rng& rng) {
  const std::size_t V = vocab_.size(), E = cfg_.embed_dim, H = cfg_.hidden_dim;
  const std::size_t A = attention_dim();
  params_.add("enc.embed", uniform_tensor({V, E}, kInitRange, rng));
  params_.add("dec.embed", uniform_tensor({V, E}, kInitRange, rng));
  std::size_t enc_in = E;
  if (cfg_.architecture == Architecture::kHierarchical) {
    add_cell(params_, "enc.char.fwd", cfg_.cell, E, H, rng);
    add_cell(params_, "enc.char.bwd", cfg_.cell, E, H, rng);
    params_.add("enc.char.att.W", uniform_tensor({2 * H, A}, kInitRange, rng));
    params_.add("enc.char.att.b", Tensor({1, A}));
    params_.add("enc.char.att.u", uniform_tensor({1, A}, kInitRange, rng));
    enc_in = 2 * H;
  }
  for (std::size_t l = 0; l < cfg_.encoder_layers; ++l) {
    const std::size_t in = l == 0 ? enc_in : 2 * H;
    add_cell(params_, layer_name("enc", l, "fwd"), cfg_.cell, in, H, rng);
    add_cell(params_, layer_name("enc", l, "bwd"), cfg_.cell, in, H, rng);
  }
  if (has_attention()) {
    params_.add("att.Wq", uniform_tensor({H, A}, kInitRange, rng));
    params_.add("att.Wk", uniform_tensor({2 * H, A}, kInitRange, rng));
    params_.add("att.bk", Tensor({1, A}));
    params_.add("att.v", uniform_tensor({1, A}, kInitRange, rng));
  }
  params_.add("dec.init.W", uniform_tensor({2 * H, H}, kInitRange, rng));
  params_.add("dec.init.b", Tensor({1, H}));
  for (std::size_t l = 0; l < cfg_.decoder_layers; ++l) {
    const std::size_t in = l == 0 ? E + 2 * H : H;
    add_cell(params_, layer_name("dec", l), cfg_.cell, in, H, rng);
  }
  params_.add("out.W", uniform_tensor({H + 2 * H + E, V}, kInitRange, rng));
  params_.add("out.b", Tensor({1, V}));
}

RnnModel::Bound RnnModel::bind(Graph& g, ParamSet& params) const {
  const std::size_t E = cfg_.embed_dim, H = cfg_.hidden_dim;
  Bound p;
  p.enc_embed = g.param(params.at("enc.embed"));
  p.dec_embed = g.param(params.at("dec.embed"));
  std::size_t enc_in = E;
  if (cfg_.architecture == Architecture::kHierarchical) {
    p.char_fwd = bind_cell(g, params, {cfg_.cell, E, H, "enc.char.fwd"});
    p.char_bwd = bind_cell(g, params, {cfg_.cell, E, H, "enc.char.bwd"});
    p.char_att_w = g.param(params.at("enc.char.att.W"));
    p.char_att_b = g.param(params.at("enc.char.att.b"));
    p.char_att_u = g.param(params.at("enc.char.att.u"));
    enc_in = 2 * H;
  }
  for (std::size_t l = 0; l < cfg_.encoder_layers; ++l) {
    const std::size_t in = l == 0 ? enc_in : 2 * H;
    p.enc_layers.emplace_back(bind_cell(g, params, {cfg_.cell, in, H, layer_name("enc", l, "fwd")}),
                              bind_cell(g, params, {cfg_.cell, in, H, layer_name("enc", l, "bwd")}));
  }
  if (has_attention()) {
    p.att.w_query = g.param(params.at("att.Wq"));
    p.att.w_key = g.param(params.at("att.Wk"));
    p.att.b_key = g.param(params.at("att.bk"));
    p.att.v = g.param(params.at("att.v"));
  }
  p.init_w = g.param(params.at("dec.init.W"));
  p.init_b = g.param(params.at("dec.init.b"));
  for (std::size_t l = 0; l < cfg_.decoder_layers; ++l) {
    const std::size_t in = l == 0 ? E + 2 * H : H;
    p.dec_layers.push_back(bind_cell(g, params, {cfg_.cell, in, H, layer_name("dec", l)}));
  }
  p.out_w = g.param(params.at("out.W"));
  p.out_b = g.param(params.at("out.b"));
  return p;
}

RnnModel::Encoded RnnModel::encode(Graph& g, const Bound& p, const Batch& batch, bool train,
                                   Rng& rng) const {
  if (cfg_.architecture == Architecture::kHierarchical) {
    return encode_hierarchical(g, p, batch, train, rng);
  }
  return encode_flat(g, p, batch, train, rng);
}

RnnModel::Encoded RnnModel::encode_flat(Graph& g, const Bound& p, const Batch& batch,
                                        bool train, Rng& rng) const {
  const std::size_t B = batch.size, T = batch.src_len;
  std::vector<Var> inputs, masks;
  std::vector<std::size_t> ids(B);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t b = 0; b < B; ++b) ids[b] = batch.src[b * T + t];
    inputs.push_back(dropout(embed(p.enc_embed, ids), cfg_.dropout, train, rng));
    masks.push_back(g.constant(mask_column(batch.src_lengths, t)));
  }
  BiEncoding enc;
  for (const auto& [fwd, bwd] : p.enc_layers) {
    enc = bidirectional_encode(inputs, fwd, bwd, masks);
    inputs = enc.states;
  }
  Encoded out;
  out.steps = T;
  out.lengths = batch.src_lengths;
  out.states = dropout(stack_time(enc.states), cfg_.dropout, train, rng);
  out.final_state = enc.final_state;
  if (has_attention()) out.keys = attention_keys(out.states, p.att);
  return out;
}

RnnModel::Encoded RnnModel::encode_hierarchical(Graph& g, const Bound& p, const Batch& batch,
                                                bool train, Rng& rng) const {
  const std::size_t B = batch.size, T = batch.src_len, C = cfg_.chunk_size;
  if (C < 1) throw InvalidArgument("chunk_size must be >= 1");
  std::vector<std::size_t> chunks(B);
  std::size_t K = 0;
  for (std::size_t b = 0; b < B; ++b) {
    chunks[b] = chunk_sizes(batch.src_lengths[b], C).size();
    K = std::max(K, chunks[b]);
  }
  const std::size_t R = B * K;

  // Characters regrouped as R = B * K short sequences of length C.
  std::vector<std::size_t> chunk_len(R, 1);
  std::vector<std::size_t> flat_len(R, 0);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t start = k * C, len = batch.src_lengths[b];
      const std::size_t n = start < len ? std::min(C, len - start) : 0;
      flat_len[b * K + k] = n;
      chunk_len[b * K + k] = std::max<std::size_t>(n, 1);
    }
  }
  std::vector<Var> char_inputs, char_masks;
  std::vector<std::size_t> ids(R);
  for (std::size_t pos = 0; pos < C; ++pos) {
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t k = 0; k < K; ++k) {
        const std::size_t r = b * K + k;
        ids[r] = pos < flat_len[r] ? batch.src[b * T + k * C + pos] : CharVocab::kPad;
      }
    }
    char_inputs.push_back(dropout(embed(p.enc_embed, ids), cfg_.dropout, train, rng));
    char_masks.push_back(g.constant(mask_column(flat_len, pos)));
  }
  BiEncoding char_enc = bidirectional_encode(char_inputs, p.char_fwd, p.char_bwd, char_masks);
  Var char_states = stack_time(char_enc.states);
  Var u = add(matmul(char_states, p.char_att_w), p.char_att_b);
  Var alpha1 = softmax(additive_scores(u, Var{}, p.char_att_u, C), chunk_len);
  Var chunk_vec = weighted_sum(alpha1, char_states);

  std::vector<Var> inputs, masks;
  std::vector<std::size_t> rows(B);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t b = 0; b < B; ++b) rows[b] = b * K + k;
    inputs.push_back(gather_rows(chunk_vec, rows));
    masks.push_back(g.constant(mask_column(chunks, k)));
  }
  BiEncoding enc;
  for (const auto& [fwd, bwd] : p.enc_layers) {
    enc = bidirectional_encode(inputs, fwd, bwd, masks);
    inputs = enc.states;
  }
  Encoded out;
  out.steps = K;
  out.lengths = chunks;
  out.states = dropout(stack_time(enc.states), cfg_.dropout, train, rng);
  out.final_state = enc.final_state;
  out.keys = attention_keys(out.states, p.att);
  out.char_attention = alpha1;
  out.chunk_lengths = flat_len;
  return out;
}

RnnModel::DecoderState RnnModel::initial_decoder(Graph& g, const Bound& p,
                                                 const Encoded& enc) const {
  Var h0 = tanh(add(matmul(enc.final_state, p.init_w), p.init_b));
  DecoderState s;
  for (const BoundCell& cell : p.dec_layers) {
    RecurrentState r = initial_state(g, cell.spec, h0.rows());
    r.h = h0;
    s.layers.push_back(r);
  }
  return s;
}

RnnModel::StepOut RnnModel::decode_step(Graph& g, const Bound& p, const Encoded& enc,
                                        std::span<const std::size_t> prev_ids,
                                        const DecoderState& state, bool train,
                                        Rng& rng) const {
  for (std::size_t id : prev_ids) {
    if (id >= vocab_.size()) throw IndexError("symbol id " + std::to_string(id) + " not in vocab");
  }
  (void)g;
  StepOut out;
  Var e = dropout(embed(p.dec_embed, prev_ids), cfg_.dropout, train, rng);
  if (has_attention()) {
    AttentionResult r = attend_bahdanau(state.layers.back().h, enc.states, enc.keys, p.att,
                                        enc.steps, enc.lengths);
    out.context = r.context;
    out.weights = r.weights;
  } else {
    out.context = enc.final_state;
  }
  std::array<Var, 2> in{e, out.context};
  Var x = concat_cols(in);
  for (std::size_t l = 0; l < p.dec_layers.size(); ++l) {
    RecurrentState s = cell_step(p.dec_layers[l], x, state.layers[l]);
    out.state.layers.push_back(s);
    x = s.h;
  }
  std::array<Var, 3> feat{x, out.context, e};
  Var h = dropout(concat_cols(feat), cfg_.dropout, train, rng);
  out.logits = add(matmul(h, p.out_w), p.out_b);
  return out;
}

Var RnnModel::loss(Graph& g, const Batch& batch, bool train, Rng& rng) {
  if (batch.tgt_len == 0) throw InvalidArgument("loss needs a batch with targets");
  Bound p = bind(g, params_);
  Encoded enc = encode(g, p, batch, train, rng);
  DecoderState state = initial_decoder(g, p, enc);
  const std::size_t B = batch.size, T = batch.tgt_len;
  std::vector<Var> logits;
  std::vector<std::size_t> prev(B), targets;
  std::vector<double> weights;
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t b = 0; b < B; ++b) {
      prev[b] = batch.tgt_in[b * T + i];
      targets.push_back(batch.tgt_out[b * T + i]);
      const std::size_t len = batch.tgt_lengths[b];
      weights.push_back(i < len ? 1.0 / (static_cast<double>(len) * B) : 0.0);
    }
    StepOut s = decode_step(g, p, enc, prev, state, train, rng);
    logits.push_back(s.logits);
    state = std::move(s.state);
  }
  return softmax_cross_entropy(concat_rows(logits), targets, weights);
}

std::vector<TransductionModel::Decoded> RnnModel::greedy(const Batch& batch,
                                                         std::size_t max_len) const {
  Graph g(false);
  Rng unused(0);
  auto& params = const_cast<ParamSet&>(params_);  // a non-recording graph only reads
  Bound p = bind(g, params);
  Encoded enc = encode(g, p, batch, false, unused);
  DecoderState state = initial_decoder(g, p, enc);
  const std::size_t B = batch.size;
  std::vector<Decoded> out(B);
  std::vector<std::vector<std::vector<double>>> rows(B);
  std::vector<bool> done(B, false);
  std::vector<std::size_t> prev(B, CharVocab::kBos);
  std::size_t remaining = B;
  for (std::size_t step = 0; step < max_len && remaining > 0; ++step) {
    StepOut s = decode_step(g, p, enc, prev, state, false, unused);
    const Tensor& z = s.logits.value();
    for (std::size_t b = 0; b < B; ++b) {
      const std::size_t id = argmax_row(z, b);
      prev[b] = id;
      if (done[b]) continue;
      const std::size_t cols = enc.lengths[b];
      std::vector<double> row(cols, 1.0 / static_cast<double>(cols));
      if (s.weights.valid()) {
        const Tensor& w = s.weights.value();
        for (std::size_t j = 0; j < cols; ++j) row[j] = w(b, j);
      }
      rows[b].push_back(std::move(row));
      if (id == CharVocab::kEos) {
        done[b] = true;
        --remaining;
      } else {
        out[b].ids.push_back(id);
      }
    }
    state = std::move(s.state);
  }
  for (std::size_t b = 0; b < B; ++b) {
    out[b].truncated = !done[b];
    const std::size_t cols = enc.lengths[b];
    Tensor att({rows[b].size(), cols});
    for (std::size_t i = 0; i < rows[b].size(); ++i) {
      std::copy(rows[b][i].begin(), rows[b][i].end(), att.data.begin() + i * cols);
    }
    out[b].attention = std::move(att);
  }
  return out;
}

StepTrace RnnModel::trace(const GraphemeString& source, const GraphemeString& target) const {
  std::vector<std::vector<std::size_t>> src{source_ids(source)}, tgt{vocab_.encode(target)};
  Batch batch = make_batch(src, tgt);
  Graph g(false);
  Rng unused(0);
  auto& params = const_cast<ParamSet&>(params_);
  Bound p = bind(g, params);
  Encoded enc = encode(g, p, batch, false, unused);
  DecoderState state = initial_decoder(g, p, enc);
  StepTrace tr;
  const std::size_t cols = enc.lengths[0];
  tr.attention = Tensor({batch.tgt_len, cols});
  for (std::size_t i = 0; i < batch.tgt_len; ++i) {
    std::size_t prev = batch.tgt_in[i];
    StepOut s = decode_step(g, p, enc, std::span<const std::size_t>(&prev, 1), state, false,
                            unused);
    tr.distributions.push_back(softmax(s.logits).value());
    tr.contexts.push_back(s.context.value());
    for (std::size_t j = 0; j < cols; ++j) {
      tr.attention(i, j) = s.weights.valid() ? s.weights.value()(0, j) : 1.0 / cols;
    }
    state = std::move(s.state);
  }
  return tr;
}

HierarchicalTrace RnnModel::hierarchical_trace(const GraphemeString& source,
                                               const GraphemeString& target) const {
  std::vector<std::vector<std::size_t>> src{source_ids(source)};
  Batch batch = make_source_batch(src);
  Graph g(false);
  Rng unused(0);
  auto& params = const_cast<ParamSet&>(params_);
  Bound p = bind(g, params);
  Encoded enc = encode(g, p, batch, false, unused);
  HierarchicalTrace tr;
  tr.chunk_sizes = chunk_sizes(batch.src_lengths[0], cfg_.chunk_size);
  tr.char_attention = enc.char_attention.value();
  StepTrace st = trace(source, target);
  tr.chunk_attention = std::move(st.attention);
  return tr;
}

void RnnModel::load_embeddings(const EmbeddingTable& table) {
  for (const char* name : {"enc.embed", "dec.embed"}) {
    Tensor& t = params_.at(name);
    if (t.shape != table.table.shape) {
      throw InvalidShape(std::string("embedding table ") + shape_string(table.table.shape) +
                         " does not fit " + name + " " + shape_string(t.shape));
    }
    t.data = table.table.data;
    t.requires_grad = table.trainable;
  }
}

}  // namespace cogtrans::detail
