// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "cogtrans/error_taxonomy.hpp"
#include "cogtrans/errors.hpp"
#include "cogtrans/synthetic.hpp"
#include "cogtrans/vocab.hpp"
#include "cogtrans/wx.hpp"

using namespace cogtrans;

namespace {

std::vector<GraphemeString> word_list() {
  std::ifstream in(std::string(COGTRANS_TEST_DATA) + "/hindi_words.txt");
  std::vector<GraphemeString> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(graphemes(line));
  }
  return out;
}

std::set<ErrorTag> tags_wx(const char32_t* s, const char32_t* g, const char32_t* p) {
  return classify_errors(s, g, p, Script::kWx);
}

}  // namespace

TEST_CASE("WX encoding examples", "[wx]") {
  CHECK(wx_encode(U"अ") == U"a");
  CHECK(wx_encode(U"आ") == U"A");
  CHECK(wx_encode(U"का") == U"kA");
  CHECK(wx_encode(U"कांप") == U"kAMpa");
  CHECK(wx_encode(U"भेंट") == U"BeMta");
  CHECK(wx_encode(U"नमस्ते") == U"namaswe");
  CHECK(wx_encode(U"जगत्") == U"jagaw");
  CHECK(wx_encode(U"क्षमा") == U"kRamA");
  CHECK(wx_decode(U"kAMpa") == U"कांप");
  CHECK(wx_decode(U"yajamAna") == U"यजमान");
  CHECK(wx_decode(U"Jata") == U"झट");
}

TEST_CASE("WX anusvara is M", "[wx]") {
  for (const char32_t* w : {U"हिंदी", U"मंदिर", U"गंगा"}) {
    const std::u32string wx = wx_encode(w);
    CHECK(wx.find(U'M') != std::u32string::npos);
  }
  const std::u32string bare = wx_encode(U"कं");
  CHECK(bare == U"kaM");
}

TEST_CASE("WX round trip on the sample word list", "[wx]") {
  const auto words = word_list();
  REQUIRE(words.size() > 100);
  for (const GraphemeString& w : words) {
    INFO(to_utf8(w));
    const std::u32string wx = wx_encode(w);
    CHECK(detect_script(wx) == Script::kWx);
    CHECK(wx_decode(wx) == w);
    CHECK(wx_encode(wx_decode(wx)) == wx);
  }
}

TEST_CASE("WX errors carry offsets", "[wx]") {
  try {
    wx_encode(U"कॉ");
    FAIL("expected UnmappedSymbol");
  } catch (const UnmappedSymbol& e) {
    CHECK(e.offset() == 1);
  }
  CHECK_THROWS_AS(wx_encode(U"ाक"), UnmappedSymbol);
  CHECK_THROWS_AS(wx_decode(U"ka#"), UnmappedSymbol);
  std::istringstream table("# comment\nU+0915\tk\nU+0905\ta\n");
  const WxCodec small = WxCodec::from_stream(table);
  CHECK(small.encode(U"क") == U"ka");
  CHECK_THROWS_AS(small.encode(U"ख"), UnmappedSymbol);
}

TEST_CASE("vocabulary construction", "[vocab]") {
  const std::vector<CognatePair> one{{U"ab", U"ba"}};
  const CharVocab v = build_vocab(one);
  CHECK(v.size() == 6);
  CHECK(v.id(U'a') == 4);
  CHECK(v.id(U'b') == 5);
  CHECK(v.id(U'z') == CharVocab::kUnk);
  CHECK(build_vocab(one) == v);
  const std::vector<CognatePair> disjoint{{U"ab", U"xy"}};
  const CharVocab d = build_vocab(disjoint);
  for (char32_t c : {U'a', U'b', U'x', U'y'}) CHECK(d.contains(c));
  const std::vector<std::size_t> ids{CharVocab::kBos, 4, 5, CharVocab::kEos, 4};
  CHECK(v.decode(ids) == U"ab");
  CHECK_THROWS_AS(v.symbol(CharVocab::kPad), IndexError);
  CHECK_THROWS_AS(v.symbol(99), IndexError);
}

TEST_CASE("trailing repeat stripping", "[strip]") {
  CHECK(strip_trailing_repeats(U"Jatatatata", Script::kWx) == U"Jata");
  CHECK(strip_trailing_repeats(U"Jata", Script::kWx) == U"Jata");
  CHECK(strip_trailing_repeats(U"abbb") == U"ab");
  CHECK(strip_trailing_repeats(U"abab") == U"abab");
  CHECK(strip_trailing_repeats(U"") == U"");
  CHECK(strip_trailing_repeats(U"झटटटट") == U"झट");

  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> len(0, 10), pick(0, 2);
  for (int i = 0; i < 1000; ++i) {
    std::u32string w;
    for (int k = len(gen); k > 0; --k) w.push_back(U"abc"[pick(gen)]);
    const GraphemeString once = strip_trailing_repeats(w);
    CHECK(strip_trailing_repeats(once) == once);
    CHECK(w.compare(0, once.size(), once) == 0);
  }
}

TEST_CASE("error taxonomy examples", "[taxonomy]") {
  CHECK(tags_wx(U"BeMta", U"Beta", U"Benta") == std::set<ErrorTag>{ErrorTag::kAnusvara});
  CHECK(tags_wx(U"BeMta", U"Beta", U"Beta").empty());

  const GraphemeString gold = U"कमलकरनिलम";
  const GraphemeString pred = U"कमलकरनीलम";
  REQUIRE(gold.size() == 9);
  CHECK(classify_errors(U"कमल", gold, pred, Script::kDevanagari) ==
        std::set<ErrorTag>{ErrorTag::kLongWord, ErrorTag::kVowelLength});

  CHECK(classify_errors(U"पानी", U"पानी", U"पनी", Script::kDevanagari) ==
        std::set<ErrorTag>{ErrorTag::kIdenticalExpected, ErrorTag::kVowelLength});
  CHECK(classify_errors(U"जगत्", U"जगत्", U"जगत", Script::kDevanagari).count(ErrorTag::kHalant));
  CHECK(classify_errors(U"क्षमा", U"क्षमा", U"कमा", Script::kDevanagari)
            .count(ErrorTag::kConjunctKRaJFa));
  CHECK(classify_errors(U"कर्म", U"कर्म", U"करम", Script::kDevanagari)
            .count(ErrorTag::kRephDiacritic));
  CHECK(classify_errors(U"कल", U"कल", U"ाकल", Script::kDevanagari)
            .count(ErrorTag::kInvalidSequence));
  CHECK(classify_errors(U"कल", U"कल", U"कोल", Script::kDevanagari)
            .count(ErrorTag::kVowelQuality));
  CHECK_THROWS_AS(classify_errors(U"kala", U"कल", U"कल", Script::kDevanagari), InvalidArgument);
  CHECK(join_tags({ErrorTag::kAnusvara, ErrorTag::kLongWord}) == "Anusvara,LongWord");
}

TEST_CASE("error taxonomy properties", "[taxonomy]") {
  const auto words = word_list();
  for (const GraphemeString& g : words) {
    CHECK(is_well_formed_devanagari(g));
    CHECK(classify_errors(words.front(), g, g, Script::kDevanagari).empty());
  }
  CHECK_FALSE(is_well_formed_devanagari(U"्क"));
  CHECK_FALSE(is_well_formed_devanagari(U"क््"));
  for (const CognatePair& p : generate_pairs(4, 200, default_ruleset())) {
    CHECK(classify_errors(p.source, p.target, p.target, Script::kRaw).empty());
  }
}
