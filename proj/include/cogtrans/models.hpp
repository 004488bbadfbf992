// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cogtrans/cells.hpp"
#include "cogtrans/graph.hpp"
#include "cogtrans/vocab.hpp"

namespace cogtrans {

enum class Architecture { kSeq2Seq, kAlignment, kHierarchical, kTransformer };

const char* architecture_name(Architecture a);
Architecture parse_architecture(const std::string& name);

struct ModelConfig {
  Architecture architecture = Architecture::kAlignment;
  CellKind cell = CellKind::kLstm;
  std::size_t hidden_dim = 80;
  std::size_t encoder_layers = 1;
  std::size_t decoder_layers = 1;
  std::size_t embed_dim = 300;
  std::size_t attention_dim = 0;  // 0: same as hidden_dim
  double dropout = 0.2;
  // Transformer only.
  std::size_t num_layers = 2;
  std::size_t num_heads = 4;
  std::size_t d_model = 64;
  std::size_t ffn_dim = 128;
  // Hierarchical only.
  std::size_t chunk_size = 3;
  // 0: longest training target + kDecodeMargin, filled in by the trainer.
  std::size_t max_decode_len = 0;
  std::size_t beam_width = 1;

  bool operator==(const ModelConfig&) const = default;
};

inline constexpr std::size_t kDecodeMargin = 5;

// Throws InvalidArgument for inconsistent settings.
void validate(const ModelConfig& cfg);

// Full-size transformer: 6 layers, 8 heads, d_model 512, ffn 2048.
ModelConfig transformer_base_preset();

// A padded batch. Sources carry BOS ... EOS; target inputs are BOS y1 .. yn
// and outputs y1 .. yn EOS. Row b of every id grid starts at b * len.
struct Batch {
  std::size_t size = 0;
  std::size_t src_len = 0;
  std::vector<std::size_t> src;
  std::vector<std::size_t> src_lengths;
  std::size_t tgt_len = 0;
  std::vector<std::size_t> tgt_in;
  std::vector<std::size_t> tgt_out;
  std::vector<std::size_t> tgt_lengths;
};

Batch make_batch(std::span<const std::vector<std::size_t>> sources,
                 std::span<const std::vector<std::size_t>> targets);
Batch make_source_batch(std::span<const std::vector<std::size_t>> sources);

// Decoder steps x encoder steps; every row is a probability distribution.
using AttentionMatrix = Tensor;

struct Transduction {
  std::vector<std::size_t> ids;  // without EOS
  GraphemeString word;
  AttentionMatrix attention;
  bool truncated = false;  // max_decode_len reached before EOS
};

// Per-step view of a teacher-forced pass over a single word.
struct StepTrace {
  std::vector<Tensor> distributions;  // each [1, vocab]
  std::vector<Tensor> contexts;       // context fed to each decoder step
  AttentionMatrix attention;
};

class TransductionModel {
 public:
  TransductionModel(ModelConfig cfg, CharVocab vocab)
      : cfg_(std::move(cfg)), vocab_(std::move(vocab)) {}
  virtual ~TransductionModel() = default;

  const ModelConfig& config() const { return cfg_; }
  ModelConfig& mutable_config() { return cfg_; }
  const CharVocab& vocab() const { return vocab_; }
  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

  // Mean over words of each word's mean character cross-entropy.
  virtual Var loss(Graph& g, const Batch& batch, bool train, Rng& rng) = 0;

  // Greedy decoding. Safe to call concurrently on a model nobody trains.
  std::vector<Transduction> transduce(std::span<const GraphemeString> words) const;
  Transduction transduce(const GraphemeString& word) const;

  virtual StepTrace trace(const GraphemeString& source, const GraphemeString& target) const = 0;

  // Replaces encoder/decoder embedding rows (both tables) with `table`.
  virtual void load_embeddings(const EmbeddingTable& table) = 0;

  std::vector<std::size_t> source_ids(const GraphemeString& word) const;

 protected:
  struct Decoded {
    std::vector<std::size_t> ids;
    AttentionMatrix attention;
    bool truncated = false;
  };
  virtual std::vector<Decoded> greedy(const Batch& batch, std::size_t max_len) const = 0;
  std::size_t decode_limit(const Batch& batch) const;

  ModelConfig cfg_;
  CharVocab vocab_;
  ParamSet params_;
};

std::unique_ptr<TransductionModel> make_model(const ModelConfig& cfg, const CharVocab& vocab,
                                              std::uint64_t seed);
// Wraps existing parameters; throws IncompatibleCheckpoint if the layout does
// not match what cfg would create.
std::unique_ptr<TransductionModel> make_model(const ModelConfig& cfg, const CharVocab& vocab,
                                              const ParamSet& params);

// ---------------------------------------------------------------------------
// Building blocks exposed for reuse and testing.

struct AdditiveAttentionParams {
  Var w_query;  // [query_dim, a]
  Var w_key;    // [state_dim, a]
  Var b_key;    // [1, a]
  Var v;        // [1, a]
};

struct AttentionResult {
  Var context;  // [N, state_dim]
  Var weights;  // [N, T]
};

// Keys are states * w_key + b_key; pass them precomputed so every decoder step
// can reuse them.
Var attention_keys(Var states, const AdditiveAttentionParams& p);

// energies_j = v . tanh(W_s s_prev + W_h h_j), alpha = softmax(energies),
// c = sum_j alpha_j h_j. states is [N * T, d] with row n * T + j.
AttentionResult attend_bahdanau(Var s_prev, Var states, Var keys,
                                const AdditiveAttentionParams& p, std::size_t steps,
                                std::span<const std::size_t> lengths = {});

// Sizes of consecutive chunks covering `length` items; the last chunk may be
// short (it is padded inside the model).
std::vector<std::size_t> chunk_sizes(std::size_t length, std::size_t chunk_size);

// PE(pos, 2k) = sin(pos / 10000^(2k/d)), PE(pos, 2k+1) = cos(same).
Tensor positional_encoding(std::size_t length, std::size_t d_model);

struct MultiHeadParams {
  Var wq, bq, wk, wv, bv, wo, bo;
};

// Projects, attends per head, concatenates heads and projects the result.
Var multi_head_attention(Var queries, Var keys_values, const MultiHeadParams& p,
                         const AttentionShape& shape,
                         std::span<const std::size_t> key_lengths = {},
                         std::vector<Tensor>* weights_out = nullptr);

// Character-level and chunk-level attention of the hierarchical encoder for
// one word.
struct HierarchicalTrace {
  std::vector<std::size_t> chunk_sizes;
  AttentionMatrix char_attention;   // chunks x chunk_size
  AttentionMatrix chunk_attention;  // decoder steps x chunks
};

// Only valid for Architecture::kHierarchical models.
HierarchicalTrace han_trace(const TransductionModel& model, const GraphemeString& source,
                            const GraphemeString& target);

// Transformer views. Only valid for Architecture::kTransformer models.
// Encoder output rows for one source word (BOS/EOS included).
Tensor tn_encode(const TransductionModel& model, const GraphemeString& source);
// Next-character distributions [prefix_len, vocab] for a target prefix
// (the prefix is given as vocabulary ids, starting with BOS).
Tensor tn_forward(const TransductionModel& model, const GraphemeString& source,
                  std::span<const std::size_t> prefix_ids);

}  // namespace cogtrans
