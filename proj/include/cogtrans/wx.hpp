// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "cogtrans/text.hpp"

namespace cogtrans {

inline constexpr char32_t kVirama = U'्';
inline constexpr char32_t kNukta = U'़';
inline constexpr char32_t kAnusvara = U'ं';
inline constexpr char32_t kChandrabindu = U'ँ';
inline constexpr char32_t kVisarga = U'ः';

bool is_consonant(char32_t c);
bool is_independent_vowel(char32_t c);
bool is_vowel_sign(char32_t c);  // dependent vowel (matra)
// Signs that must follow a base letter: matras, virama, nukta, anusvara,
// chandrabindu and visarga.
bool is_combining_sign(char32_t c);

// Orthographic WX transliteration driven by a code point table. A consonant
// without a vowel sign carries the inherent "a"; a consonant followed by the
// virama is written bare.
class WxCodec {
 public:
  // Table lines "U+XXXX<TAB>wx"; '#' starts a comment line.
  static WxCodec from_stream(std::istream& in);
  static WxCodec from_file(const std::filesystem::path& path);
  // The table shipped in data/wx_table.tsv, or the file named by the
  // COGTRANS_WX_TABLE environment variable.
  static const WxCodec& standard();

  // Throws UnmappedSymbol for code points outside the table and for sequences
  // the notation cannot express (a sign with no base letter, a virama before
  // an independent vowel).
  std::u32string encode(std::u32string_view devanagari) const;
  std::u32string decode(std::u32string_view wx) const;

 private:
  std::map<char32_t, char32_t> to_wx_;          // letters and signs
  std::map<char32_t, char32_t> consonant_;      // wx -> consonant
  std::map<char32_t, char32_t> vowel_;          // wx -> independent vowel
  std::map<char32_t, char32_t> vowel_sign_;     // wx -> matra
  std::map<char32_t, char32_t> sign_;           // wx -> anusvara, nukta, ...
};

std::u32string wx_encode(std::u32string_view devanagari);
std::u32string wx_decode(std::u32string_view wx);

}  // namespace cogtrans
