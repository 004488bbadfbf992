// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cogtrans {

enum class Script { kDevanagari, kWx, kRaw };

const char* script_name(Script s);
Script parse_script(const std::string& name);

// Words are sequences of NFC code points; one code point is one grapheme unit
// for every length, distance and n-gram computation in the toolkit.
using GraphemeString = std::u32string;

// Throws InvalidArgument on malformed UTF-8.
std::u32string utf8_to_u32(std::string_view s);
std::string to_utf8(std::u32string_view s);

std::u32string nfc(std::u32string_view s);
// Decodes, normalises to NFC, and returns code points.
GraphemeString graphemes(std::string_view utf8);

bool is_devanagari(char32_t c);
// Devanagari when every code point is in the Devanagari block, WX when every
// code point is printable ASCII, raw otherwise. Empty strings report kRaw.
Script detect_script(std::u32string_view s);

struct CognatePair {
  GraphemeString source;
  GraphemeString target;

  bool operator==(const CognatePair&) const = default;
};

}  // namespace cogtrans
