// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/wx.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cogtrans/errors.hpp"

#ifndef COGTRANS_DATA_DIR
#define COGTRANS_DATA_DIR "data"
#endif

namespace cogtrans {

bool is_consonant(char32_t c) { return (c >= 0x915 && c <= 0x939) || (c >= 0x958 && c <= 0x95F); }
bool is_independent_vowel(char32_t c) {
  return (c >= 0x904 && c <= 0x914) || c == 0x960 || c == 0x961;
}
bool is_vowel_sign(char32_t c) { return (c >= 0x93E && c <= 0x94C) || c == 0x962 || c == 0x963; }
bool is_combining_sign(char32_t c) {
  return is_vowel_sign(c) || c == kVirama || c == kNukta || c == kAnusvara ||
         c == kChandrabindu || c == kVisarga;
}

WxCodec WxCodec::from_stream(std::istream& in) {
  WxCodec codec;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.rfind("U+", 0) != 0) {
      throw ParseError(number, "expected U+XXXX<TAB>wx");
    }
    const char32_t cp = static_cast<char32_t>(std::stoul(line.substr(2, tab - 2), nullptr, 16));
    const std::u32string wx = utf8_to_u32(line.substr(tab + 1));
    if (wx.size() != 1) throw ParseError(number, "WX value must be one letter");
    const char32_t w = wx[0];
    codec.to_wx_[cp] = w;
    if (is_consonant(cp)) {
      codec.consonant_[w] = cp;
    } else if (is_independent_vowel(cp)) {
      codec.vowel_[w] = cp;
    } else if (is_vowel_sign(cp)) {
      codec.vowel_sign_[w] = cp;
    } else {
      codec.sign_[w] = cp;
    }
  }
  return codec;
}

WxCodec WxCodec::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open WX table " + path.string());
  return from_stream(in);
}

const WxCodec& WxCodec::standard() {
  static const WxCodec codec = [] {
    const char* env = std::getenv("COGTRANS_WX_TABLE");
    return from_file(env ? std::filesystem::path(env)
                         : std::filesystem::path(COGTRANS_DATA_DIR) / "wx_table.tsv");
  }();
  return codec;
}

std::u32string WxCodec::encode(std::u32string_view dev) const {
  std::u32string out;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    const char32_t c = dev[i];
    if (is_consonant(c)) {
      auto it = to_wx_.find(c);
      if (it == to_wx_.end()) throw UnmappedSymbol(i, "unmapped consonant");
      out.push_back(it->second);
      if (i + 1 < dev.size() && dev[i + 1] == kNukta) {
        out.push_back(to_wx_.at(kNukta));
        ++i;
      }
      if (i + 1 < dev.size() && dev[i + 1] == kVirama) {
        ++i;
        if (i + 1 < dev.size() && is_independent_vowel(dev[i + 1])) {
          throw UnmappedSymbol(i, "virama before an independent vowel has no WX spelling");
        }
      } else if (i + 1 < dev.size() && is_vowel_sign(dev[i + 1])) {
        auto v = to_wx_.find(dev[i + 1]);
        if (v == to_wx_.end()) throw UnmappedSymbol(i + 1, "unmapped vowel sign");
        out.push_back(v->second);
        ++i;
      } else {
        out.push_back(U'a');
      }
    } else if (is_vowel_sign(c) || c == kVirama || c == kNukta) {
      throw UnmappedSymbol(i, "sign without a base consonant");
    } else {
      auto it = to_wx_.find(c);
      if (it == to_wx_.end()) throw UnmappedSymbol(i, "unmapped symbol");
      out.push_back(it->second);
    }
  }
  return out;
}

std::u32string WxCodec::decode(std::u32string_view wx) const {
  std::u32string out;
  const auto nukta = sign_.find(U'Z');
  for (std::size_t i = 0; i < wx.size(); ++i) {
    const char32_t w = wx[i];
    if (auto c = consonant_.find(w); c != consonant_.end()) {
      out.push_back(c->second);
      if (i + 1 < wx.size() && wx[i + 1] == U'Z' && nukta != sign_.end()) {
        out.push_back(nukta->second);
        ++i;
      }
      if (i + 1 < wx.size() && wx[i + 1] == U'a') {
        ++i;
      } else if (auto v = i + 1 < wx.size() ? vowel_sign_.find(wx[i + 1]) : vowel_sign_.end();
                 v != vowel_sign_.end()) {
        out.push_back(v->second);
        ++i;
      } else {
        out.push_back(kVirama);
      }
    } else if (auto v = vowel_.find(w); v != vowel_.end()) {
      out.push_back(v->second);
    } else if (auto s = sign_.find(w); s != sign_.end() && w != U'Z') {
      out.push_back(s->second);
    } else {
      throw UnmappedSymbol(i, "not a WX letter");
    }
  }
  return out;
}

std::u32string wx_encode(std::u32string_view devanagari) {
  return WxCodec::standard().encode(devanagari);
}

std::u32string wx_decode(std::u32string_view wx) { return WxCodec::standard().decode(wx); }

}  // namespace cogtrans
