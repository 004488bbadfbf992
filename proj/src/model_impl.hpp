// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "cogtrans/models.hpp"

namespace cogtrans::detail {

// seq2seq with context peek, alignment model and hierarchical attention
// network share one encoder-decoder skeleton; they differ in how the encoder
// summarises the word and in what the decoder attends to.
class RnnModel : public TransductionModel {
 public:
  RnnModel(ModelConfig cfg, CharVocab vocab);
  void init(Rng& rng);

  Var loss(Graph& g, const Batch& batch, bool train, Rng& rng) override;
  StepTrace trace(const GraphemeString& source, const GraphemeString& target) const override;
  void load_embeddings(const EmbeddingTable& table) override;

  HierarchicalTrace hierarchical_trace(const GraphemeString& source,
                                       const GraphemeString& target) const;

 protected:
  std::vector<Decoded> greedy(const Batch& batch, std::size_t max_len) const override;

 private:
  struct Bound;
  struct Encoded {
    Var states;  // [B * steps, 2H]
    Var keys;    // [B * steps, a]
    Var final_state;
    std::size_t steps = 0;
    std::vector<std::size_t> lengths;
    Var char_attention;  // HAN only: [B * chunks, chunk_size]
    std::vector<std::size_t> chunk_lengths;
  };
  struct DecoderState {
    std::vector<RecurrentState> layers;
  };
  struct StepOut {
    Var logits;
    Var context;
    Var weights;  // invalid for seq2seq
    DecoderState state;
  };

  Bound bind(Graph& g, ParamSet& params) const;
  Encoded encode(Graph& g, const Bound& p, const Batch& batch, bool train, Rng& rng) const;
  Encoded encode_flat(Graph& g, const Bound& p, const Batch& batch, bool train, Rng& rng) const;
  Encoded encode_hierarchical(Graph& g, const Bound& p, const Batch& batch, bool train,
                              Rng& rng) const;
  DecoderState initial_decoder(Graph& g, const Bound& p, const Encoded& enc) const;
  StepOut decode_step(Graph& g, const Bound& p, const Encoded& enc,
                      std::span<const std::size_t> prev_ids, const DecoderState& state,
                      bool train, Rng& rng) const;
  bool has_attention() const { return cfg_.architecture != Architecture::kSeq2Seq; }
  std::size_t attention_dim() const;
};

class TransformerModel : public TransductionModel {
 public:
  TransformerModel(ModelConfig cfg, CharVocab vocab);
  void init(Rng& rng);

  Var loss(Graph& g, const Batch& batch, bool train, Rng& rng) override;
  StepTrace trace(const GraphemeString& source, const GraphemeString& target) const override;
  void load_embeddings(const EmbeddingTable& table) override;

  Tensor encode_word(const GraphemeString& source) const;
  Tensor distributions(const GraphemeString& source, std::span<const std::size_t> prefix) const;

 protected:
  std::vector<Decoded> greedy(const Batch& batch, std::size_t max_len) const override;

 private:
  Var encode(Graph& g, ParamSet& params, const Batch& batch, bool train, Rng& rng) const;
  // Returns decoder output rows [B * tgt_len, d].
  Var decode(Graph& g, ParamSet& params, Var memory, const Batch& batch,
             std::span<const std::size_t> tgt_ids, std::size_t tgt_len,
             std::span<const std::size_t> tgt_lengths, bool train, Rng& rng,
             std::vector<Tensor>* cross_weights) const;
  Var logits(Graph& g, ParamSet& params, Var hidden) const;
  Var embed_positions(Graph& g, ParamSet& params, const std::string& table,
                      std::span<const std::size_t> ids, std::size_t batch, std::size_t len,
                      bool train, Rng& rng) const;
};

}  // namespace cogtrans::detail
