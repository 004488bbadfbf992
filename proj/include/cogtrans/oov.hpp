// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cogtrans/metrics.hpp"
#include "cogtrans/models.hpp"
#include "cogtrans/text.hpp"

namespace cogtrans {

class FrequencyShortlist {
 public:
  FrequencyShortlist() = default;
  FrequencyShortlist(std::vector<std::pair<std::string, std::size_t>> ranked, std::size_t k);

  std::size_t k() const { return k_; }
  std::size_t size() const { return ranked_.size(); }
  bool contains(const std::string& word) const { return members_.count(word) != 0; }
  // (word, count) pairs, most frequent first.
  const std::vector<std::pair<std::string, std::size_t>>& ranked() const { return ranked_; }

 private:
  std::vector<std::pair<std::string, std::size_t>> ranked_;
  std::set<std::string> members_;
  std::size_t k_ = 0;
};

// Top-k tokens by frequency; equal counts keep the lexicographically smaller
// word. Throws EmptyInput for an empty corpus and InvalidArgument for k == 0.
FrequencyShortlist build_shortlist(std::span<const std::string> tokens, std::size_t k);

// Whitespace tokenisation.
std::vector<std::string> tokenize(const std::string& sentence);
std::string detokenize(std::span<const std::string> tokens);

// A token split into leading punctuation, word and trailing punctuation
// (ASCII punctuation, danda and double danda).
struct TokenParts {
  std::string lead;
  std::string core;
  std::string trail;
};
TokenParts split_punctuation(const std::string& token);

// Positions whose word (punctuation detached) is not in the shortlist.
// Tokens that are pure punctuation are never OOV.
std::set<std::size_t> detect_oov(std::span<const std::string> tokens,
                                 const FrequencyShortlist& shortlist);

// For each source column, the target rows whose argmax falls on it (ties go
// to the lowest column). Throws InvalidAttention when a row is not a
// distribution (sum off by more than 1e-3 or a negative entry).
std::vector<std::vector<std::size_t>> align_from_attention(const AttentionMatrix& att);

struct AlignedSentencePair {
  std::vector<std::string> source;
  std::vector<std::string> target;  // baseline translation
  AttentionMatrix attention;        // target rows x source columns
};

// Maps a word to its transduction; may throw to signal failure.
using WordTransducer = std::function<GraphemeString(const GraphemeString&)>;

struct Correction {
  std::vector<std::string> tokens;
  std::vector<std::size_t> replaced_source;  // OOV source positions that were used
  std::vector<std::string> log;              // unaligned words and transducer failures
};

// Every target token aligned to an OOV source word is replaced: the first
// aligned token takes the transduction (with its punctuation re-attached) and
// further aligned tokens are dropped. Everything else is kept as is.
Correction correct_translation(const AlignedSentencePair& pair, const std::set<std::size_t>& oov,
                               const WordTransducer& transducer);

// Greedy transduction with HAN outputs cleaned by strip_trailing_repeats.
WordTransducer model_transducer(const TransductionModel& model, Script script = Script::kRaw);

struct PipelineRecord {
  std::vector<std::string> source;
  std::vector<std::string> baseline;
  AttentionMatrix attention;
  std::vector<std::string> reference;  // empty when unknown
};

struct PipelineRow {
  std::size_t k = 0;
  double baseline_bleu = 0.0;
  double corrected_bleu = 0.0;
  double delta = 0.0;
  std::size_t replaced = 0;
};

// One row per shortlist size. Throws InvalidArgument when a record has no
// reference.
std::vector<PipelineRow> evaluate_pipeline(std::span<const PipelineRecord> corpus,
                                           std::span<const std::string> monolingual,
                                           std::span<const std::size_t> shortlist_sizes,
                                           const WordTransducer& transducer);

std::vector<Correction> correct_corpus(std::span<const PipelineRecord> corpus,
                                       const FrequencyShortlist& shortlist,
                                       const WordTransducer& transducer);

// TSV "source<TAB>baseline[<TAB>reference]" with a sidecar matrix file holding,
// per record, uint32 rows, uint32 cols and rows * cols little-endian float64.
std::vector<PipelineRecord> load_pipeline(const std::filesystem::path& tsv,
                                          const std::filesystem::path& matrices);
void save_pipeline(std::span<const PipelineRecord> corpus, const std::filesystem::path& tsv,
                   const std::filesystem::path& matrices);
// Columns: source, baseline, reference (possibly empty), corrected.
void save_corrections(std::span<const PipelineRecord> corpus,
                      std::span<const Correction> corrections, const std::filesystem::path& tsv);

std::string format_pipeline_table(std::span<const PipelineRow> rows);

}  // namespace cogtrans
