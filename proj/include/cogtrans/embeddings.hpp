// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "cogtrans/cells.hpp"
#include "cogtrans/vocab.hpp"

namespace cogtrans {

class WordVectorStore {
 public:
  // Throws InvalidShape when the dimension differs from earlier vectors and
  // InvalidArgument for a repeated word.
  void add(GraphemeString word, std::vector<double> vector);
  std::size_t size() const { return vectors_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return vectors_.empty(); }
  const std::vector<double>* find(const GraphemeString& word) const;
  const std::map<GraphemeString, std::vector<double>>& vectors() const { return vectors_; }

 private:
  std::map<GraphemeString, std::vector<double>> vectors_;
  std::size_t dim_ = 0;
};

// Lines "word v1 ... vD"; an optional first line "count dim" is skipped.
WordVectorStore read_word_vectors(std::istream& in);
WordVectorStore load_word_vectors(const std::filesystem::path& path);

struct FtAvgResult {
  EmbeddingTable table;          // one row per vocabulary id
  std::vector<char32_t> missing;  // vocabulary symbols found in no stored word
};

// e_c = sum_w count(c, w) v_w / sum_w count(c, w) over the distinct corpus
// words that have a vector. With token_weighting every corpus occurrence of a
// word counts separately. Special ids and missing symbols get zero rows.
// Throws EmptyInput for an empty store.
FtAvgResult ft_avg_embed(const WordVectorStore& store, const CharVocab& vocab,
                         std::span<const GraphemeString> corpus, bool token_weighting = false);
// Uses every stored word once.
FtAvgResult ft_avg_embed(const WordVectorStore& store, const CharVocab& vocab);

// Copies rows of `table` (indexed by `from`) into a table indexed by `to`;
// rows for symbols absent from `from` are zero.
EmbeddingTable remap_embeddings(const EmbeddingTable& table, const CharVocab& from,
                                const CharVocab& to);

// Next-character model: a distribution over vocabulary ids given the ids of
// the preceding characters.
class CharPredictor {
 public:
  virtual ~CharPredictor() = default;
  virtual std::size_t vocab_size() const = 0;
  // Longest context the model looks at; longer contexts are cut from the left.
  virtual std::size_t context_length() const = 0;
  virtual std::vector<double> predict(std::span<const std::size_t> context) const = 0;
  // Batched form; contexts all have the same length.
  virtual std::vector<std::vector<double>> predict_batch(
      std::span<const std::vector<std::size_t>> contexts) const;
};

// exp(mean NLL) over every character that has context_length() predecessors,
// or over every character after the first when the text is shorter. Throws
// EmptyInput when nothing can be predicted.
double perplexity(const CharPredictor& lm, const CharVocab& vocab, std::u32string_view held_out);

enum class LmDirection { kForward, kBidirectional };

struct CharLMConfig {
  std::size_t window = 30;  // context of window - 1 characters
  std::size_t hidden = 75;
  double dropout = 0.5;
  LmDirection direction = LmDirection::kForward;
  std::size_t embed_dim = 300;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 30;
  std::size_t patience = 7;
  double lr = 1e-3;
  double held_out_fraction = 0.1;
  // Distance between consecutive training windows.
  std::size_t stride = 1;
  std::uint64_t seed = 1;
};

struct CharLMResult {
  CharVocab vocab;
  EmbeddingTable table;
  double perplexity = 0.0;  // on the held-out tail of the corpus
  std::size_t epochs = 0;
  std::shared_ptr<const CharPredictor> model;
};

// Trains an LSTM next-character model on the first part of `corpus` and
// reports perplexity on the last held_out_fraction. The bidirectional variant
// reads the context both ways; it never sees the predicted character. Throws
// InvalidArgument when the corpus is not longer than the window.
CharLMResult train_char_lm(std::u32string_view corpus, const CharLMConfig& cfg);

}  // namespace cogtrans
