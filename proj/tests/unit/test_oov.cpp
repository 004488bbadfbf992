// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <map>
#include <random>

#include "cogtrans/errors.hpp"
#include "cogtrans/oov.hpp"
#include "cogtrans/synthetic.hpp"

using namespace cogtrans;

namespace {

Tensor identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

GraphemeString upper(const GraphemeString& w) {
  GraphemeString out = w;
  for (char32_t& c : out) c = std::toupper(static_cast<int>(c));
  return out;
}

}  // namespace

TEST_CASE("shortlist", "[oov]") {
  const std::vector<std::string> corpus{"a", "a", "b"};
  const FrequencyShortlist one = build_shortlist(corpus, 1);
  CHECK(one.contains("a"));
  CHECK_FALSE(one.contains("b"));
  CHECK(build_shortlist(corpus, 10).size() == 2);
  const std::vector<std::string> tie{"d", "c", "b", "b", "c", "a"};
  const FrequencyShortlist t = build_shortlist(tie, 2);
  CHECK(t.contains("b"));
  CHECK(t.contains("c"));
  CHECK_FALSE(t.contains("d"));
  const FrequencyShortlist t1 = build_shortlist(tie, 3);
  CHECK(t1.contains("a"));
  for (std::size_t i = 1; i < t1.ranked().size(); ++i) {
    CHECK(t1.ranked()[i - 1].second >= t1.ranked()[i].second);
  }
  CHECK_THROWS_AS(build_shortlist(std::vector<std::string>{}, 3), EmptyInput);
  CHECK_THROWS_AS(build_shortlist(corpus, 0), InvalidArgument);
}

TEST_CASE("OOV detection", "[oov]") {
  const std::vector<std::string> mono{"a", "b"};
  const FrequencyShortlist ab = build_shortlist(mono, 2);
  CHECK(detect_oov(std::vector<std::string>{"a", "c", "b"}, ab) == std::set<std::size_t>{1});
  CHECK(detect_oov(std::vector<std::string>{"a", "b", "a"}, ab).empty());
  CHECK(detect_oov(std::vector<std::string>{"a,", "(b)", "c।", "।"}, ab) ==
        std::set<std::size_t>{2});
  CHECK(detect_oov(std::vector<std::string>{"a", "c"}, FrequencyShortlist{}) ==
        std::set<std::size_t>{0, 1});
}

TEST_CASE("tokens and punctuation", "[oov]") {
  CHECK(tokenize("  a  bb\tc ") == std::vector<std::string>{"a", "bb", "c"});
  CHECK(detokenize(std::vector<std::string>{"a", "b"}) == "a b");
  const TokenParts p = split_punctuation("(घर।");
  CHECK(p.lead == "(");
  CHECK(p.core == "घर");
  CHECK(p.trail == "।");
  CHECK(split_punctuation("...").core.empty());
}

TEST_CASE("alignment from attention", "[oov]") {
  const auto id = align_from_attention(identity(3));
  for (std::size_t i = 0; i < 3; ++i) CHECK(id[i] == std::vector<std::size_t>{i});
  const auto one = align_from_attention(Tensor({1, 3}, std::vector<double>{0.1, 0.7, 0.2}));
  CHECK(one[1] == std::vector<std::size_t>{0});
  CHECK(one[0].empty());
  const auto tie = align_from_attention(Tensor({1, 2}, std::vector<double>{0.5, 0.5}));
  CHECK(tie[0] == std::vector<std::size_t>{0});
  const auto fan = align_from_attention(
      Tensor({3, 2}, std::vector<double>{0.9, 0.1, 0.8, 0.2, 0.3, 0.7}));
  CHECK(fan[0] == std::vector<std::size_t>{0, 1});
  CHECK(fan[1] == std::vector<std::size_t>{2});
  CHECK_THROWS_AS(align_from_attention(Tensor({1, 2}, std::vector<double>{0.5, 0.6})),
                  InvalidAttention);
  CHECK_THROWS_AS(align_from_attention(Tensor({1, 2}, std::vector<double>{1.2, -0.2})),
                  InvalidAttention);
}

TEST_CASE("translation correction", "[oov]") {
  AlignedSentencePair pair{{"w0", "w1", "w2"}, {"t0", "t1,", "t2"}, identity(3)};
  SECTION("no OOV keeps the baseline") {
    CHECK(correct_translation(pair, {}, upper).tokens == pair.target);
  }
  SECTION("one aligned OOV replaces exactly one token and keeps punctuation") {
    const Correction c = correct_translation(pair, {1}, upper);
    CHECK(c.tokens == std::vector<std::string>{"t0", "W1,", "t2"});
    CHECK(c.replaced_source == std::vector<std::size_t>{1});
  }
  SECTION("fan-out keeps one transduction") {
    pair.attention = Tensor({3, 3}, std::vector<double>{1, 0, 0, 0, 1, 0, 0, 1, 0});
    const Correction c = correct_translation(pair, {1}, upper);
    CHECK(c.tokens == std::vector<std::string>{"t0", "W1"});
  }
  SECTION("unaligned words and transducer failures are logged") {
    pair.attention = Tensor({3, 3}, std::vector<double>{1, 0, 0, 1, 0, 0, 0, 0, 1});
    const Correction c = correct_translation(pair, {1}, upper);
    CHECK(c.tokens == pair.target);
    CHECK(c.log.size() == 1);
    pair.attention = identity(3);
    const WordTransducer broken = [](const GraphemeString&) -> GraphemeString {
      throw Error("no model");
    };
    const Correction d = correct_translation(pair, {0, 2}, broken);
    CHECK(d.tokens == pair.target);
    CHECK(d.log.size() == 2);
  }
  SECTION("only tokens aligned to OOV positions change") {
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + gen() % 6;
      AlignedSentencePair p;
      Tensor att({n, n});
      for (std::size_t i = 0; i < n; ++i) {
        p.source.push_back("s" + std::to_string(i));
        p.target.push_back("t" + std::to_string(i));
        att(i, gen() % n) = 1.0;
      }
      p.attention = att;
      std::set<std::size_t> oov;
      for (std::size_t i = 0; i < n; ++i) {
        if (gen() % 3 == 0) oov.insert(i);
      }
      const auto aligned = align_from_attention(att);
      std::set<std::size_t> touched;
      for (std::size_t j : oov) touched.insert(aligned[j].begin(), aligned[j].end());
      const Correction c = correct_translation(p, oov, upper);
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (touched.count(i)) continue;
        while (k < c.tokens.size() && c.tokens[k] != p.target[i]) ++k;
        CHECK(k < c.tokens.size());
      }
      CHECK(c.tokens.size() <= n);
    }
  }
}

TEST_CASE("pipeline evaluation", "[oov]") {
  std::vector<PipelineRecord> corpus;
  std::map<GraphemeString, GraphemeString> dictionary;
  for (int s = 0; s < 5; ++s) {
    PipelineRecord r;
    for (int i = 0; i < 4; ++i) {
      const std::string src = "s" + std::to_string(s * 4 + i);
      const std::string tgt = "t" + std::to_string(s * 4 + i);
      r.source.push_back(src);
      r.baseline.push_back(tgt);
      dictionary[graphemes(src)] = graphemes(tgt);
    }
    r.reference = r.baseline;
    r.attention = identity(4);
    corpus.push_back(r);
  }
  std::vector<std::string> mono;
  for (const auto& r : corpus) mono.insert(mono.end(), r.source.begin(), r.source.end());
  const WordTransducer lookup = [&](const GraphemeString& w) { return dictionary.at(w); };
  const std::vector<std::size_t> ks{1, 5, 20, 100};
  for (const PipelineRow& row : evaluate_pipeline(corpus, mono, ks, lookup)) {
    CHECK(row.delta == 0.0);
    CHECK(row.baseline_bleu == Catch::Approx(100.0));
  }
  const auto rows = evaluate_pipeline(corpus, mono, ks, lookup);
  CHECK(rows.size() == 4);
  CHECK(rows[0].replaced == 19);
  CHECK(rows[3].replaced == 0);
  CHECK(format_pipeline_table(rows).find("100") != std::string::npos);
  corpus[2].reference.clear();
  CHECK_THROWS_AS(evaluate_pipeline(corpus, mono, ks, lookup), InvalidArgument);
}

TEST_CASE("pipeline files round trip", "[oov]") {
  SyntheticMtConfig cfg;
  cfg.sentences = 20;
  cfg.monolingual_tokens = 500;
  const SyntheticMtCorpus mt = generate_mt_corpus(cfg, default_ruleset());
  const auto dir = std::filesystem::temp_directory_path() / "cogtrans_oov_io";
  std::filesystem::create_directories(dir);
  save_pipeline(mt.records, dir / "c.tsv", dir / "c.att");
  const auto back = load_pipeline(dir / "c.tsv", dir / "c.att");
  REQUIRE(back.size() == mt.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].source == mt.records[i].source);
    CHECK(back[i].baseline == mt.records[i].baseline);
    CHECK(back[i].reference == mt.records[i].reference);
    CHECK(back[i].attention.data == mt.records[i].attention.data);
  }
  std::filesystem::resize_file(dir / "c.att", 10);
  CHECK_THROWS_AS(load_pipeline(dir / "c.tsv", dir / "c.att"), Error);
  std::filesystem::remove_all(dir);
}
