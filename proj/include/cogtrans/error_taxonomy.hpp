// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <vector>

#include "cogtrans/text.hpp"

namespace cogtrans {

enum class ErrorTag {
  kHalant,
  kAnusvara,
  kVowelQuality,
  kConjunctKRaJFa,
  kRephDiacritic,
  kVowelLength,
  kLongWord,
  kIdenticalExpected,
  kInvalidSequence,
};

const char* error_tag_name(ErrorTag tag);
std::string join_tags(const std::set<ErrorTag>& tags);

// Words longer than this many code points count as long words.
inline constexpr std::size_t kLongWordLength = 6;

// Tags for a wrong prediction; empty when prediction == gold. WX input is
// decoded to Devanagari first, so lengths and rules apply to Devanagari code
// points. Throws InvalidArgument when source or gold is not in `script`.
std::set<ErrorTag> classify_errors(const GraphemeString& source, const GraphemeString& gold,
                                   const GraphemeString& prediction, Script script);

// Structural problems: a leading combining sign, a doubled virama, a vowel
// sign after something other than a consonant, and so on.
bool is_well_formed_devanagari(std::u32string_view word);

// Drops the last code point while it equals its predecessor. With kWx the rule
// runs on the Devanagari spelling, so "Jatatatata" becomes "Jata".
GraphemeString strip_trailing_repeats(std::u32string_view word);
GraphemeString strip_trailing_repeats(std::u32string_view word, Script script);

}  // namespace cogtrans
