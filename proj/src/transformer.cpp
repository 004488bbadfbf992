// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>

#include "cogtrans/errors.hpp"
#include "model_impl.hpp"

namespace cogtrans::detail {
namespace {

Tensor xavier(std::size_t in, std::size_t out, Rng& rng) {
  return uniform_tensor({in, out}, std::sqrt(6.0 / static_cast<double>(in + out)), rng);
}

void add_attention(ParamSet& ps, const std::string& prefix, std::size_t d, Rng& rng) {
  // No key bias: softmax over keys is invariant to it.
  for (const char* m : {"q", "k", "v", "o"}) {
    ps.add(prefix + ".W" + m, xavier(d, d, rng));
    if (*m != 'k') ps.add(prefix + ".b" + m, Tensor({1, d}));
  }
}

void add_norm(ParamSet& ps, const std::string& prefix, std::size_t d) {
  ps.add(prefix + ".g", Tensor({1, d}, 1.0));
  ps.add(prefix + ".b", Tensor({1, d}));
}

MultiHeadParams bind_attention(Graph& g, ParamSet& ps, const std::string& prefix) {
  auto p = [&](const char* n) { return g.param(ps.at(prefix + n)); };
  return {p(".Wq"), p(".bq"), p(".Wk"), p(".Wv"), p(".bv"), p(".Wo"), p(".bo")};
}

Var norm(Graph& g, ParamSet& ps, const std::string& prefix, Var x) {
  return layer_norm(x, g.param(ps.at(prefix + ".g")), g.param(ps.at(prefix + ".b")));
}

Var feed_forward(Graph& g, ParamSet& ps, const std::string& prefix, Var x) {
  auto p = [&](const char* n) { return g.param(ps.at(prefix + n)); };
  Var h = relu(add(matmul(x, p(".W1")), p(".b1")));
  return add(matmul(h, p(".W2")), p(".b2"));
}

std::string layer(const char* stack, std::size_t l) {
  return std::string("tn.") + stack + ".l" + std::to_string(l);
}

}  // namespace

TransformerModel::TransformerModel(ModelConfig cfg, CharVocab vocab)
    : TransductionModel(std::move(cfg), std::move(vocab)) {}

void TransformerModel::init(Rng& rng) {
  const std::size_t V = vocab_.size(), d = cfg_.d_model, f = cfg_.ffn_dim;
  params_.add("tn.src.embed", xavier(V, d, rng));
  params_.add("tn.tgt.embed", xavier(V, d, rng));
  auto add_ffn = [&](const std::string& prefix) {
    params_.add(prefix + ".W1", xavier(d, f, rng));
    params_.add(prefix + ".b1", Tensor({1, f}));
    params_.add(prefix + ".W2", xavier(f, d, rng));
    params_.add(prefix + ".b2", Tensor({1, d}));
  };
  for (std::size_t l = 0; l < cfg_.num_layers; ++l) {
    const std::string p = layer("enc", l);
    add_attention(params_, p + ".self", d, rng);
    add_norm(params_, p + ".ln1", d);
    add_ffn(p + ".ffn");
    add_norm(params_, p + ".ln2", d);
  }
  for (std::size_t l = 0; l < cfg_.num_layers; ++l) {
    const std::string p = layer("dec", l);
    add_attention(params_, p + ".self", d, rng);
    add_norm(params_, p + ".ln1", d);
    add_attention(params_, p + ".cross", d, rng);
    add_norm(params_, p + ".ln2", d);
    add_ffn(p + ".ffn");
    add_norm(params_, p + ".ln3", d);
  }
  params_.add("tn.out.W", xavier(d, V, rng));
  params_.add("tn.out.b", Tensor({1, V}));
}

Var TransformerModel::embed_positions(Graph& g, ParamSet& params, const std::string& table,
                                      std::span<const std::size_t> ids, std::size_t batch,
                                      std::size_t len, bool train, Rng& rng) const {
  for (std::size_t id : ids) {
    if (id >= vocab_.size()) throw IndexError("symbol id " + std::to_string(id) + " not in vocab");
  }
  const std::size_t d = cfg_.d_model;
  Tensor pe = positional_encoding(len, d);
  Tensor tiled({batch * len, d});
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy(pe.data.begin(), pe.data.end(), tiled.data.begin() + b * len * d);
  }
  Var x = add(embed(g.param(params.at(table)), ids), g.constant(std::move(tiled)));
  return dropout(x, cfg_.dropout, train, rng);
}

Var TransformerModel::encode(Graph& g, ParamSet& params, const Batch& batch, bool train,
                             Rng& rng) const {
  const std::size_t B = batch.size, T = batch.src_len;
  if (B == 0 || T == 0) throw EmptyInput("transformer encoder on an empty batch");
  Var x = embed_positions(g, params, "tn.src.embed", batch.src, B, T, train, rng);
  const AttentionShape shape{B, T, T, cfg_.num_heads, false};
  for (std::size_t l = 0; l < cfg_.num_layers; ++l) {
    const std::string p = layer("enc", l);
    Var a = multi_head_attention(x, x, bind_attention(g, params, p + ".self"), shape,
                                 batch.src_lengths);
    x = norm(g, params, p + ".ln1", add(x, dropout(a, cfg_.dropout, train, rng)));
    Var f = feed_forward(g, params, p + ".ffn", x);
    x = norm(g, params, p + ".ln2", add(x, dropout(f, cfg_.dropout, train, rng)));
  }
  return x;
}

Var TransformerModel::decode(Graph& g, ParamSet& params, Var memory, const Batch& batch,
                             std::span<const std::size_t> tgt_ids, std::size_t tgt_len,
                             std::span<const std::size_t> tgt_lengths, bool train, Rng& rng,
                             std::vector<Tensor>* cross_weights) const {
  (void)tgt_lengths;  // causal masking already hides padding that follows each target
  const std::size_t B = batch.size;
  Var y = embed_positions(g, params, "tn.tgt.embed", tgt_ids, B, tgt_len, train, rng);
  const AttentionShape self_shape{B, tgt_len, tgt_len, cfg_.num_heads, true};
  const AttentionShape cross_shape{B, tgt_len, batch.src_len, cfg_.num_heads, false};
  for (std::size_t l = 0; l < cfg_.num_layers; ++l) {
    const std::string p = layer("dec", l);
    Var a = multi_head_attention(y, y, bind_attention(g, params, p + ".self"), self_shape);
    y = norm(g, params, p + ".ln1", add(y, dropout(a, cfg_.dropout, train, rng)));
    const bool last = l + 1 == cfg_.num_layers;
    Var c = multi_head_attention(y, memory, bind_attention(g, params, p + ".cross"), cross_shape,
                                 batch.src_lengths, last ? cross_weights : nullptr);
    y = norm(g, params, p + ".ln2", add(y, dropout(c, cfg_.dropout, train, rng)));
    Var f = feed_forward(g, params, p + ".ffn", y);
    y = norm(g, params, p + ".ln3", add(y, dropout(f, cfg_.dropout, train, rng)));
  }
  return y;
}

Var TransformerModel::logits(Graph& g, ParamSet& params, Var hidden) const {
  return add(matmul(hidden, g.param(params.at("tn.out.W"))), g.param(params.at("tn.out.b")));
}

Var TransformerModel::loss(Graph& g, const Batch& batch, bool train, Rng& rng) {
  if (batch.tgt_len == 0) throw InvalidArgument("loss needs a batch with targets");
  Var memory = encode(g, params_, batch, train, rng);
  Var hidden = decode(g, params_, memory, batch, batch.tgt_in, batch.tgt_len, batch.tgt_lengths,
                      train, rng, nullptr);
  const std::size_t B = batch.size, T = batch.tgt_len;
  std::vector<double> weights(B * T, 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    const std::size_t len = batch.tgt_lengths[b];
    for (std::size_t i = 0; i < len; ++i) weights[b * T + i] = 1.0 / (static_cast<double>(len) * B);
  }
  return softmax_cross_entropy(logits(g, params_, hidden), batch.tgt_out, weights);
}

std::vector<TransductionModel::Decoded> TransformerModel::greedy(const Batch& batch,
                                                                 std::size_t max_len) const {
  Graph g(false);
  Rng unused(0);
  auto& params = const_cast<ParamSet&>(params_);  // a non-recording graph only reads
  Var memory = encode(g, params, batch, false, unused);
  const std::size_t B = batch.size;
  std::vector<std::vector<std::size_t>> prefix(B, {CharVocab::kBos});
  std::vector<Decoded> out(B);
  std::vector<std::vector<std::vector<double>>> rows(B);
  std::vector<bool> done(B, false);
  std::size_t remaining = B;
  for (std::size_t step = 0; step < max_len && remaining > 0; ++step) {
    const std::size_t L = step + 1;
    std::vector<std::size_t> ids(B * L);
    for (std::size_t b = 0; b < B; ++b) std::copy(prefix[b].begin(), prefix[b].end(), &ids[b * L]);
    std::vector<Tensor> cross;
    Var hidden = decode(g, params, memory, batch, ids, L, {}, false, unused, &cross);
    std::vector<std::size_t> last(B);
    for (std::size_t b = 0; b < B; ++b) last[b] = b * L + L - 1;
    const Tensor z = logits(g, params, gather_rows(hidden, last)).value();
    for (std::size_t b = 0; b < B; ++b) {
      const double* row = &z.data[b * z.cols()];
      const auto id = static_cast<std::size_t>(std::max_element(row, row + z.cols()) - row);
      prefix[b].push_back(id);
      if (done[b]) continue;
      const std::size_t cols = batch.src_lengths[b];
      std::vector<double> att(cols);
      for (std::size_t j = 0; j < cols; ++j) att[j] = cross[b](L - 1, j);
      rows[b].push_back(std::move(att));
      if (id == CharVocab::kEos) {
        done[b] = true;
        --remaining;
      } else {
        out[b].ids.push_back(id);
      }
    }
  }
  for (std::size_t b = 0; b < B; ++b) {
    out[b].truncated = !done[b];
    const std::size_t cols = batch.src_lengths[b];
    Tensor att({rows[b].size(), cols});
    for (std::size_t i = 0; i < rows[b].size(); ++i) {
      std::copy(rows[b][i].begin(), rows[b][i].end(), att.data.begin() + i * cols);
    }
    out[b].attention = std::move(att);
  }
  return out;
}

StepTrace TransformerModel::trace(const GraphemeString& source,
                                  const GraphemeString& target) const {
  if (source.empty()) throw EmptyInput("cannot trace an empty word");
  std::vector<std::vector<std::size_t>> src{source_ids(source)}, tgt{vocab_.encode(target)};
  Batch batch = make_batch(src, tgt);
  Graph g(false);
  Rng unused(0);
  auto& params = const_cast<ParamSet&>(params_);
  Var memory = encode(g, params, batch, false, unused);
  std::vector<Tensor> cross;
  Var hidden = decode(g, params, memory, batch, batch.tgt_in, batch.tgt_len, batch.tgt_lengths,
                      false, unused, &cross);
  const Tensor probs = softmax(logits(g, params, hidden)).value();
  const Tensor& h = hidden.value();
  StepTrace tr;
  for (std::size_t i = 0; i < batch.tgt_len; ++i) {
    tr.distributions.emplace_back(Shape{1, probs.cols()},
                                  std::vector<double>(probs.data.begin() + i * probs.cols(),
                                                      probs.data.begin() + (i + 1) * probs.cols()));
    tr.contexts.emplace_back(Shape{1, h.cols()},
                             std::vector<double>(h.data.begin() + i * h.cols(),
                                                 h.data.begin() + (i + 1) * h.cols()));
  }
  tr.attention = std::move(cross.front());
  return tr;
}

Tensor TransformerModel::encode_word(const GraphemeString& source) const {
  if (source.empty()) throw EmptyInput("cannot encode an empty word");
  std::vector<std::vector<std::size_t>> src{source_ids(source)};
  Batch batch = make_source_batch(src);
  Graph g(false);
  Rng unused(0);
  return encode(g, const_cast<ParamSet&>(params_), batch, false, unused).value();
}

Tensor TransformerModel::distributions(const GraphemeString& source,
                                       std::span<const std::size_t> prefix) const {
  if (source.empty()) throw EmptyInput("cannot transduce an empty word");
  if (prefix.empty()) throw InvalidArgument("target prefix must start with BOS");
  std::vector<std::vector<std::size_t>> src{source_ids(source)};
  Batch batch = make_source_batch(src);
  Graph g(false);
  Rng unused(0);
  auto& params = const_cast<ParamSet&>(params_);
  Var memory = encode(g, params, batch, false, unused);
  Var hidden = decode(g, params, memory, batch, prefix, prefix.size(), {}, false, unused, nullptr);
  return softmax(logits(g, params, hidden)).value();
}

void TransformerModel::load_embeddings(const EmbeddingTable& table) {
  for (const char* name : {"tn.src.embed", "tn.tgt.embed"}) {
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
