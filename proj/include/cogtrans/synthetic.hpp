// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cogtrans/embeddings.hpp"
#include "cogtrans/oov.hpp"
#include "cogtrans/text.hpp"

namespace cogtrans {

enum class Anchor { kInitial, kFinal, kAnywhere };

struct RewriteRule {
  Anchor anchor = Anchor::kAnywhere;
  GraphemeString from;
  GraphemeString to;
  double probability = 1.0;
};

using Ruleset = std::vector<RewriteRule>;

// Initial y -> j, final nA -> lA, M -> n anywhere.
Ruleset default_ruleset();

// The 40-symbol WX alphabet words are drawn from.
const std::u32string& synthetic_alphabet();

// Applies one rule (all non-overlapping matches, left to right, for kAnywhere).
GraphemeString apply_rule(const GraphemeString& word, const RewriteRule& rule);

// Applies the rules in order. Throws InvalidArgument for a rule whose
// probability is not 1.
GraphemeString oracle_transduce(const GraphemeString& word, const Ruleset& rules);

struct GeneratorConfig {
  std::size_t min_length = 2;
  std::size_t max_length = 12;
  // Share of pairs drawn from words no rule touches.
  double identity_fraction = 0.1;
  // Chance of planting each rule's pattern into a non-identity word.
  double plant_probability = 0.35;
};

// Pseudo-random source words with targets from the rules; deterministic per
// seed. Throws InvalidArgument for n == 0 or an empty ruleset.
std::vector<CognatePair> generate_pairs(std::uint64_t seed, std::size_t n, const Ruleset& rules,
                                        const GeneratorConfig& cfg = {});

// fastText-style vectors: each word is the normalised sum of seeded random
// vectors of its character n-grams (n = 1..3, with boundary marks).
WordVectorStore subword_vectors(std::span<const GraphemeString> words, std::size_t dim,
                                std::uint64_t seed);

struct SyntheticMtConfig {
  std::uint64_t seed = 11;
  std::size_t sentences = 500;
  std::size_t min_tokens = 5;
  std::size_t max_tokens = 10;
  double oov_rate = 0.2;
  std::size_t frequent_words = 300;
  std::size_t rare_words = 1000;
  std::size_t monolingual_tokens = 30000;
};

// Sentence-level stand-in for an MT system: in-shortlist words translate to
// their cognates, OOV words are copied, and the attention is near-diagonal.
struct SyntheticMtCorpus {
  std::vector<PipelineRecord> records;
  std::vector<std::string> monolingual;  // tokens for the shortlist
  std::vector<CognatePair> frequent;
  std::vector<CognatePair> rare;
  std::size_t oov_tokens = 0;
  std::size_t total_tokens = 0;
};

SyntheticMtCorpus generate_mt_corpus(const SyntheticMtConfig& cfg, const Ruleset& rules);

}  // namespace cogtrans
