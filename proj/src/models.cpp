// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "cogtrans/errors.hpp"
#include "model_impl.hpp"

namespace cogtrans {

const char* architecture_name(Architecture a) {
  switch (a) {
    case Architecture::kSeq2Seq: return "seq2seq";
    case Architecture::kAlignment: return "am";
    case Architecture::kHierarchical: return "han";
    case Architecture::kTransformer: return "tn";
  }
  return "am";
}

Architecture parse_architecture(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "seq2seq") return Architecture::kSeq2Seq;
  if (n == "am") return Architecture::kAlignment;
  if (n == "han") return Architecture::kHierarchical;
  if (n == "tn") return Architecture::kTransformer;
  throw InvalidArgument("unknown architecture '" + name + "'");
}

void validate(const ModelConfig& cfg) {
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) throw InvalidArgument("dropout must be in [0, 1)");
  if (cfg.beam_width < 1) throw InvalidArgument("beam_width must be >= 1");
  if (cfg.architecture == Architecture::kTransformer) {
    if (cfg.num_layers < 1 || cfg.num_heads < 1 || cfg.ffn_dim < 1 || cfg.d_model < 2) {
      throw InvalidArgument("transformer sizes must be positive");
    }
    if (cfg.d_model % 2 != 0) throw InvalidArgument("d_model must be even");
    if (cfg.d_model % cfg.num_heads != 0) {
      throw InvalidArgument("d_model must be divisible by num_heads");
    }
    return;
  }
  if (cfg.hidden_dim < 1 || cfg.embed_dim < 1) throw InvalidArgument("sizes must be positive");
  if (cfg.encoder_layers < 1 || cfg.decoder_layers < 1) {
    throw InvalidArgument("layer counts must be >= 1");
  }
  if (cfg.architecture == Architecture::kHierarchical && cfg.chunk_size < 1) {
    throw InvalidArgument("chunk_size must be >= 1");
  }
}

ModelConfig transformer_base_preset() {
  ModelConfig cfg;
  cfg.architecture = Architecture::kTransformer;
  cfg.num_layers = 6;
  cfg.num_heads = 8;
  cfg.d_model = 512;
  cfg.ffn_dim = 2048;
  cfg.dropout = 0.1;
  return cfg;
}

Batch make_batch(std::span<const std::vector<std::size_t>> sources,
                 std::span<const std::vector<std::size_t>> targets) {
  if (!targets.empty() && targets.size() != sources.size()) {
    throw InvalidShape("make_batch: sources and targets differ in count");
  }
  if (sources.empty()) throw EmptyInput("make_batch on no words");
  Batch b;
  b.size = sources.size();
  for (const auto& s : sources) {
    if (s.empty()) throw EmptyInput("empty source word");
    b.src_len = std::max(b.src_len, s.size() + 2);
  }
  b.src.assign(b.size * b.src_len, CharVocab::kPad);
  for (std::size_t i = 0; i < b.size; ++i) {
    std::size_t* row = &b.src[i * b.src_len];
    row[0] = CharVocab::kBos;
    std::copy(sources[i].begin(), sources[i].end(), row + 1);
    row[sources[i].size() + 1] = CharVocab::kEos;
    b.src_lengths.push_back(sources[i].size() + 2);
  }
  if (targets.empty()) return b;
  for (const auto& t : targets) b.tgt_len = std::max(b.tgt_len, t.size() + 1);
  b.tgt_in.assign(b.size * b.tgt_len, CharVocab::kPad);
  b.tgt_out.assign(b.size * b.tgt_len, CharVocab::kPad);
  for (std::size_t i = 0; i < b.size; ++i) {
    const auto& t = targets[i];
    std::size_t* in = &b.tgt_in[i * b.tgt_len];
    std::size_t* out = &b.tgt_out[i * b.tgt_len];
    in[0] = CharVocab::kBos;
    for (std::size_t k = 0; k < t.size(); ++k) {
      in[k + 1] = t[k];
      out[k] = t[k];
    }
    out[t.size()] = CharVocab::kEos;
    b.tgt_lengths.push_back(t.size() + 1);
  }
  return b;
}

Batch make_source_batch(std::span<const std::vector<std::size_t>> sources) {
  return make_batch(sources, {});
}

std::vector<std::size_t> TransductionModel::source_ids(const GraphemeString& word) const {
  return vocab_.encode(word);
}

std::size_t TransductionModel::decode_limit(const Batch& batch) const {
  if (cfg_.max_decode_len > 0) return cfg_.max_decode_len;
  return 2 * batch.src_len + kDecodeMargin;
}

std::vector<Transduction> TransductionModel::transduce(
    std::span<const GraphemeString> words) const {
  if (cfg_.beam_width != 1) throw InvalidArgument("only greedy decoding (beam_width 1) is built");
  constexpr std::size_t kChunk = 64;
  std::vector<Transduction> out;
  out.reserve(words.size());
  for (std::size_t start = 0; start < words.size(); start += kChunk) {
    const std::size_t end = std::min(words.size(), start + kChunk);
    std::vector<std::vector<std::size_t>> ids;
    for (std::size_t i = start; i < end; ++i) {
      if (words[i].empty()) throw EmptyInput("cannot transduce an empty word");
      ids.push_back(source_ids(words[i]));
    }
    Batch batch = make_source_batch(ids);
    for (Decoded& d : greedy(batch, decode_limit(batch))) {
      Transduction t;
      t.word = vocab_.decode(d.ids);
      t.ids = std::move(d.ids);
      t.attention = std::move(d.attention);
      t.truncated = d.truncated;
      out.push_back(std::move(t));
    }
  }
  return out;
}

Transduction TransductionModel::transduce(const GraphemeString& word) const {
  std::vector<GraphemeString> one{word};
  return std::move(transduce(one).front());
}

std::unique_ptr<TransductionModel> make_model(const ModelConfig& cfg, const CharVocab& vocab,
                                              std::uint64_t seed) {
  validate(cfg);
  Rng rng(seed);
  if (cfg.architecture == Architecture::kTransformer) {
    auto m = std::make_unique<detail::TransformerModel>(cfg, vocab);
    m->init(rng);
    return m;
  }
  auto m = std::make_unique<detail::RnnModel>(cfg, vocab);
  m->init(rng);
  return m;
}

std::unique_ptr<TransductionModel> make_model(const ModelConfig& cfg, const CharVocab& vocab,
                                              const ParamSet& params) {
  auto m = make_model(cfg, vocab, 0);
  if (!m->params().same_layout(params)) {
    throw IncompatibleCheckpoint(std::string("parameters do not fit a ") +
                                 architecture_name(cfg.architecture) + " model of this size");
  }
  m->params() = params.snapshot();
  return m;
}

Var attention_keys(Var states, const AdditiveAttentionParams& p) {
  return add(matmul(states, p.w_key), p.b_key);
}

AttentionResult attend_bahdanau(Var s_prev, Var states, Var keys,
                                const AdditiveAttentionParams& p, std::size_t steps,
                                std::span<const std::size_t> lengths) {
  if (states.value().size() == 0 || steps == 0) throw EmptyInput("attention over no states");
  Var query = matmul(s_prev, p.w_query);
  Var scores = additive_scores(keys, query, p.v, steps);
  Var alpha = softmax(scores, lengths);
  return {weighted_sum(alpha, states), alpha};
}

std::vector<std::size_t> chunk_sizes(std::size_t length, std::size_t chunk_size) {
  if (chunk_size < 1) throw InvalidArgument("chunk_size must be >= 1");
  std::vector<std::size_t> out;
  for (std::size_t start = 0; start < length; start += chunk_size) {
    out.push_back(std::min(chunk_size, length - start));
  }
  return out;
}

Tensor positional_encoding(std::size_t length, std::size_t d_model) {
  if (d_model == 0 || d_model % 2 != 0) {
    throw InvalidArgument("positional encoding needs an even d_model, got " +
                          std::to_string(d_model));
  }
  Tensor pe({length, d_model});
  for (std::size_t pos = 0; pos < length; ++pos) {
    for (std::size_t k = 0; k < d_model / 2; ++k) {
      const double angle = static_cast<double>(pos) /
                           std::pow(10000.0, static_cast<double>(2 * k) / d_model);
      pe(pos, 2 * k) = std::sin(angle);
      pe(pos, 2 * k + 1) = std::cos(angle);
    }
  }
  return pe;
}

Var multi_head_attention(Var queries, Var keys_values, const MultiHeadParams& p,
                         const AttentionShape& shape, std::span<const std::size_t> key_lengths,
                         std::vector<Tensor>* weights_out) {
  Var q = add(matmul(queries, p.wq), p.bq);
  Var k = matmul(keys_values, p.wk);
  Var v = add(matmul(keys_values, p.wv), p.bv);
  Var heads = scaled_dot_attention(q, k, v, shape, key_lengths, weights_out);
  return add(matmul(heads, p.wo), p.bo);
}

HierarchicalTrace han_trace(const TransductionModel& model, const GraphemeString& source,
                            const GraphemeString& target) {
  const auto* rnn = dynamic_cast<const detail::RnnModel*>(&model);
  if (rnn == nullptr || model.config().architecture != Architecture::kHierarchical) {
    throw InvalidArgument("han_trace needs a hierarchical model");
  }
  return rnn->hierarchical_trace(source, target);
}

Tensor tn_encode(const TransductionModel& model, const GraphemeString& source) {
  const auto* tn = dynamic_cast<const detail::TransformerModel*>(&model);
  if (tn == nullptr) throw InvalidArgument("tn_encode needs a transformer model");
  return tn->encode_word(source);
}

Tensor tn_forward(const TransductionModel& model, const GraphemeString& source,
                  std::span<const std::size_t> prefix_ids) {
  const auto* tn = dynamic_cast<const detail::TransformerModel*>(&model);
  if (tn == nullptr) throw InvalidArgument("tn_forward needs a transformer model");
  return tn->distributions(source, prefix_ids);
}

}  // namespace cogtrans
