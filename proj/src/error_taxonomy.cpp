// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/error_taxonomy.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "cogtrans/errors.hpp"
#include "cogtrans/metrics.hpp"
#include "cogtrans/wx.hpp"

namespace cogtrans {
namespace {

constexpr char32_t kNa = U'न';
constexpr char32_t kAa = U'ा';
constexpr char32_t kRa = U'र';

constexpr std::array<std::pair<char32_t, char32_t>, 6> kLengthPairs{{
    {U'ि', U'ी'}, {U'ु', U'ू'}, {U'इ', U'ई'}, {U'उ', U'ऊ'}, {U'अ', U'आ'}, {U'ृ', U'ॄ'},
}};

bool is_length_pair(char32_t a, char32_t b) {
  for (auto [s, l] : kLengthPairs) {
    if ((a == s && b == l) || (a == l && b == s)) return true;
  }
  return false;
}

bool is_vowel(char32_t c) { return is_vowel_sign(c) || is_independent_vowel(c); }

// Positions covered by consonant + virama + consonant clusters of the given
// letters (kRa = k.Sa, jFa = j.Fa), or by a reph (ra + virama + consonant).
std::vector<bool> cluster_mask(std::u32string_view w, bool reph) {
  std::vector<bool> mask(w.size(), false);
  for (std::size_t i = 0; i + 2 < w.size(); ++i) {
    if (w[i + 1] != kVirama) continue;
    const bool hit = reph ? (w[i] == kRa && is_consonant(w[i + 2]) &&
                             (i == 0 || w[i - 1] != kVirama))
                          : ((w[i] == U'क' && w[i + 2] == U'ष') || (w[i] == U'ज' && w[i + 2] == U'ञ'));
    if (hit) {
      const std::size_t end = reph ? i + 2 : i + 3;
      for (std::size_t k = i; k < end; ++k) mask[k] = true;
    }
  }
  return mask;
}

void check_script(const GraphemeString& s, Script script, const char* what) {
  if (s.empty() || script == Script::kRaw) return;
  if (detect_script(s) != script) {
    throw InvalidArgument(std::string(what) + " is not in " + script_name(script) + " script");
  }
}

}  // namespace

const char* error_tag_name(ErrorTag tag) {
  switch (tag) {
    case ErrorTag::kHalant: return "Halant";
    case ErrorTag::kAnusvara: return "Anusvara";
    case ErrorTag::kVowelQuality: return "VowelQuality";
    case ErrorTag::kConjunctKRaJFa: return "ConjunctKRaJFa";
    case ErrorTag::kRephDiacritic: return "RephDiacritic";
    case ErrorTag::kVowelLength: return "VowelLength";
    case ErrorTag::kLongWord: return "LongWord";
    case ErrorTag::kIdenticalExpected: return "IdenticalExpected";
    case ErrorTag::kInvalidSequence: return "InvalidSequence";
  }
  return "";
}

std::string join_tags(const std::set<ErrorTag>& tags) {
  std::string out;
  for (ErrorTag t : tags) {
    if (!out.empty()) out += ',';
    out += error_tag_name(t);
  }
  return out;
}

bool is_well_formed_devanagari(std::u32string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const char32_t c = w[i];
    if (!is_combining_sign(c)) continue;
    if (i == 0) return false;
    const char32_t prev = w[i - 1];
    if (c == kNukta && !is_consonant(prev)) return false;
    const bool after_base = is_consonant(prev) || prev == kNukta;
    if ((is_vowel_sign(c) || c == kVirama) && !after_base) return false;
    if ((c == kAnusvara || c == kChandrabindu || c == kVisarga) &&
        !(after_base || is_vowel(prev))) {
      return false;
    }
  }
  return true;
}

std::set<ErrorTag> classify_errors(const GraphemeString& source, const GraphemeString& gold,
                                   const GraphemeString& prediction, Script script) {
  check_script(source, script, "source");
  check_script(gold, script, "gold");
  std::set<ErrorTag> tags;
  if (prediction == gold) return tags;

  GraphemeString src = source, g = gold, p = prediction;
  bool decodable = true;
  if (script == Script::kWx) {
    src = wx_decode(source);
    g = wx_decode(gold);
    try {
      p = wx_decode(prediction);
    } catch (const UnmappedSymbol&) {
      decodable = false;
    }
  }
  if (g.size() > kLongWordLength) tags.insert(ErrorTag::kLongWord);
  if (src == g) tags.insert(ErrorTag::kIdenticalExpected);
  if (!decodable || (script != Script::kRaw && !is_well_formed_devanagari(p))) {
    tags.insert(ErrorTag::kInvalidSequence);
  }
  if (!decodable || script == Script::kRaw) return tags;

  const std::vector<EditStep> steps = edit_script(g, p);
  std::vector<bool> g_changed(g.size(), false), p_changed(p.size(), false);
  std::vector<bool> g_nasal(g.size(), false), p_nasal(p.size(), false);
  for (const EditStep& s : steps) {
    if (s.op == EditOp::kSubstitute || s.op == EditOp::kDelete) g_changed[s.a_pos] = true;
    if (s.op == EditOp::kSubstitute || s.op == EditOp::kInsert) p_changed[s.b_pos] = true;
  }
  auto mark_na_virama = [](std::u32string_view w, const std::vector<bool>& changed,
                           std::vector<bool>& nasal) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == kNa && w[i + 1] == kVirama && changed[i] && changed[i + 1]) {
        nasal[i] = nasal[i + 1] = true;
      }
    }
  };
  mark_na_virama(g, g_changed, g_nasal);
  mark_na_virama(p, p_changed, p_nasal);

  auto any_changed = [](std::u32string_view w, const std::vector<bool>& changed, auto pred) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (changed[i] && pred(i)) return true;
    }
    return false;
  };
  auto is_nasal_sign = [](char32_t c) { return c == kAnusvara || c == kChandrabindu; };
  if (any_changed(g, g_changed, [&](std::size_t i) { return is_nasal_sign(g[i]) || g_nasal[i]; }) ||
      any_changed(p, p_changed, [&](std::size_t i) { return is_nasal_sign(p[i]) || p_nasal[i]; })) {
    tags.insert(ErrorTag::kAnusvara);
  }
  if (any_changed(g, g_changed, [&](std::size_t i) { return g[i] == kVirama && !g_nasal[i]; }) ||
      any_changed(p, p_changed, [&](std::size_t i) { return p[i] == kVirama && !p_nasal[i]; })) {
    tags.insert(ErrorTag::kHalant);
  }

  bool length = false, quality = false;
  for (const EditStep& s : steps) {
    if (s.op == EditOp::kSubstitute) {
      const char32_t a = g[s.a_pos], b = p[s.b_pos];
      if (is_length_pair(a, b)) {
        length = true;
      } else if (is_vowel(a) || is_vowel(b)) {
        quality = true;
      }
    } else if (s.op == EditOp::kDelete || s.op == EditOp::kInsert) {
      const char32_t c = s.op == EditOp::kDelete ? g[s.a_pos] : p[s.b_pos];
      if (c == kAa) {
        length = true;
      } else if (is_vowel(c)) {
        quality = true;
      }
    }
  }
  if (length) tags.insert(ErrorTag::kVowelLength);
  if (quality) tags.insert(ErrorTag::kVowelQuality);

  auto overlaps = [](const std::vector<bool>& mask, const std::vector<bool>& changed) {
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i] && changed[i]) return true;
    }
    return false;
  };
  if (overlaps(cluster_mask(g, false), g_changed) || overlaps(cluster_mask(p, false), p_changed)) {
    tags.insert(ErrorTag::kConjunctKRaJFa);
  }
  if (overlaps(cluster_mask(g, true), g_changed) || overlaps(cluster_mask(p, true), p_changed)) {
    tags.insert(ErrorTag::kRephDiacritic);
  }
  return tags;
}

GraphemeString strip_trailing_repeats(std::u32string_view word) {
  GraphemeString out(word);
  while (out.size() >= 2 && out[out.size() - 1] == out[out.size() - 2]) out.pop_back();
  return out;
}

GraphemeString strip_trailing_repeats(std::u32string_view word, Script script) {
  if (script != Script::kWx) return strip_trailing_repeats(word);
  try {
    return wx_encode(strip_trailing_repeats(wx_decode(word)));
  } catch (const UnmappedSymbol&) {
    return strip_trailing_repeats(word);
  }
}

}  // namespace cogtrans
