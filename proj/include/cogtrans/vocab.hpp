// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "cogtrans/text.hpp"

namespace cogtrans {

// Bidirectional symbol <-> id map. Ids 0..3 are PAD, BOS, EOS and UNK; the
// remaining ids follow code point order, so building twice from the same
// corpus assigns the same ids.
class CharVocab {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kBos = 1;
  static constexpr std::size_t kEos = 2;
  static constexpr std::size_t kUnk = 3;
  static constexpr std::size_t kNumSpecials = 4;

  CharVocab() = default;
  explicit CharVocab(std::vector<char32_t> symbols);

  std::size_t size() const { return kNumSpecials + symbols_.size(); }
  bool contains(char32_t c) const { return index_.count(c) != 0; }
  // UNK for symbols outside the vocabulary.
  std::size_t id(char32_t c) const;
  // Throws IndexError for special or out-of-range ids.
  char32_t symbol(std::size_t id) const;
  static bool is_special(std::size_t id) { return id < kNumSpecials; }

  const std::vector<char32_t>& symbols() const { return symbols_; }

  std::vector<std::size_t> encode(std::u32string_view word) const;
  // Stops at the first EOS; drops other specials.
  GraphemeString decode(std::span<const std::size_t> ids) const;

  bool operator==(const CharVocab& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<char32_t> symbols_;
  std::map<char32_t, std::size_t> index_;
};

// Union of source and target symbols across the corpus.
CharVocab build_vocab(std::span<const CognatePair> corpus);

}  // namespace cogtrans
