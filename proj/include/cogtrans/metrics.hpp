// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogtrans/text.hpp"

namespace cogtrans {

// Unit-cost insert/delete/substitute distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

enum class EditOp { kMatch, kSubstitute, kInsert, kDelete };

// One step of a minimal alignment from `a` to `b`. Insertions carry the
// position in `a` before which the symbol of `b` is inserted.
struct EditStep {
  EditOp op;
  std::size_t a_pos;
  std::size_t b_pos;
};

std::vector<EditStep> edit_script(std::u32string_view a, std::u32string_view b);

// (1 - lev / (|a| + |b|)) * 100; two empty strings score 100.
double string_similarity(std::u32string_view a, std::u32string_view b);

// Percentage of exact matches. Throws InvalidArgument on length mismatch.
double word_accuracy(std::span<const GraphemeString> predictions,
                     std::span<const GraphemeString> golds);

// Character n-gram BLEU in [0, 100] for one word. Orders longer than both
// strings are left out of the geometric mean. Throws InvalidArgument for an
// empty reference or max_n == 0.
double char_bleu(std::u32string_view prediction, std::u32string_view reference,
                 std::size_t max_n = 4);

using Sentence = std::vector<std::string>;

// Corpus-level token BLEU: clipped counts are summed over all sentences before
// the precisions are taken; the brevity penalty uses total lengths.
double corpus_bleu(std::span<const Sentence> predictions, std::span<const Sentence> references,
                   std::size_t max_n = 4);

struct ItemRecord {
  GraphemeString source;
  GraphemeString gold;
  GraphemeString prediction;
  double ss = 0.0;
  bool correct = false;
  double bleu = 0.0;
  std::vector<std::string> tags;
};

struct EvalReport {
  double bleu = 0.0;
  double ss = 0.0;
  double wa = 0.0;
  std::size_t n_items = 0;
  std::vector<ItemRecord> items;
};

// Per-item scores plus their arithmetic means.
EvalReport evaluate(std::span<const CognatePair> gold, std::span<const GraphemeString> predictions);

}  // namespace cogtrans
