// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>

#include "cogtrans/errors.hpp"
#include "cogtrans/text.hpp"

namespace cogtrans {

const char* script_name(Script s) {
  switch (s) {
    case Script::kDevanagari: return "devanagari";
    case Script::kWx: return "wx";
    case Script::kRaw: return "raw";
  }
  return "raw";
}

Script parse_script(const std::string& name) {
  if (name == "devanagari") return Script::kDevanagari;
  if (name == "wx") return Script::kWx;
  if (name == "raw") return Script::kRaw;
  throw InvalidArgument("unknown script '" + name + "'");
}

namespace {

icu::UnicodeString to_icu(std::u32string_view s) {
  return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()),
                                       static_cast<int32_t>(s.size()));
}

std::u32string from_icu(const icu::UnicodeString& u) {
  std::u32string out(static_cast<std::size_t>(u.countChar32()), U'\0');
  UErrorCode status = U_ZERO_ERROR;
  u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), status);
  if (U_FAILURE(status) && status != U_STRING_NOT_TERMINATED_WARNING) {
    throw InvalidArgument(std::string("UTF-32 conversion failed: ") + u_errorName(status));
  }
  return out;
}

}  // namespace

std::u32string utf8_to_u32(std::string_view s) {
  if (s.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  int32_t needed = 0;
  u_strFromUTF8(nullptr, 0, &needed, s.data(), static_cast<int32_t>(s.size()), &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
    throw InvalidArgument("malformed UTF-8 input");
  }
  std::u16string buf(static_cast<std::size_t>(needed), u'\0');
  status = U_ZERO_ERROR;
  u_strFromUTF8(reinterpret_cast<UChar*>(buf.data()), needed, nullptr, s.data(),
                static_cast<int32_t>(s.size()), &status);
  if (U_FAILURE(status)) throw InvalidArgument("malformed UTF-8 input");
  return from_icu(icu::UnicodeString(reinterpret_cast<const UChar*>(buf.data()), needed));
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  to_icu(s).toUTF8String(out);
  return out;
}

std::u32string nfc(std::u32string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normaliser unavailable");
  icu::UnicodeString result = norm->normalize(to_icu(s), status);
  if (U_FAILURE(status)) throw InvalidArgument("NFC normalisation failed");
  return from_icu(result);
}

GraphemeString graphemes(std::string_view utf8) { return nfc(utf8_to_u32(utf8)); }

bool is_devanagari(char32_t c) { return c >= 0x0900 && c <= 0x097F; }

Script detect_script(std::u32string_view s) {
  if (s.empty()) return Script::kRaw;
  bool all_dev = true, all_ascii = true;
  for (char32_t c : s) {
    if (!is_devanagari(c)) all_dev = false;
    if (c < 0x21 || c > 0x7E) all_ascii = false;
  }
  if (all_dev) return Script::kDevanagari;
  if (all_ascii) return Script::kWx;
  return Script::kRaw;
}

}  // namespace cogtrans
