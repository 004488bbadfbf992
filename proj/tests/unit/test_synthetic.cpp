// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cogtrans/errors.hpp"
#include "cogtrans/synthetic.hpp"

using namespace cogtrans;

namespace {

RewriteRule rule(Anchor a, const char32_t* from, const char32_t* to) {
  return RewriteRule{a, from, to, 1.0};
}

}  // namespace

TEST_CASE("rule application", "[synthetic]") {
  CHECK(apply_rule(U"yajamAna", rule(Anchor::kInitial, U"y", U"j")) == U"jajamAna");
  CHECK(apply_rule(U"ayA", rule(Anchor::kInitial, U"y", U"j")) == U"ayA");
  CHECK(apply_rule(U"darnA", rule(Anchor::kFinal, U"nA", U"lA")) == U"darlA");
  CHECK(apply_rule(U"nAnA", rule(Anchor::kFinal, U"nA", U"lA")) == U"nAlA");
  CHECK(apply_rule(U"aaaa", rule(Anchor::kAnywhere, U"aa", U"b")) == U"bb");
  CHECK(oracle_transduce(U"kAMpa", {}) == U"kAMpa");
  CHECK(oracle_transduce(U"yaM", default_ruleset()).front() == U'j');
  Ruleset maybe{RewriteRule{Anchor::kAnywhere, U"a", U"b", 0.5}};
  CHECK_THROWS_AS(oracle_transduce(U"a", maybe), InvalidArgument);
}

TEST_CASE("non-overlapping rules commute", "[synthetic]") {
  const RewriteRule r1 = rule(Anchor::kAnywhere, U"k", U"g");
  const RewriteRule r2 = rule(Anchor::kAnywhere, U"p", U"b");
  std::mt19937_64 gen(12);
  const std::u32string& alphabet = synthetic_alphabet();
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(1, 12);
  for (int i = 0; i < 1000; ++i) {
    GraphemeString w;
    for (std::size_t k = len(gen); k > 0; --k) w.push_back(alphabet[pick(gen)]);
    CHECK(oracle_transduce(w, {r1, r2}) == oracle_transduce(w, {r2, r1}));
  }
}

TEST_CASE("pair generation", "[synthetic]") {
  CHECK(synthetic_alphabet().size() == 40);
  const Ruleset rules = default_ruleset();
  const auto pairs = generate_pairs(7, 3000, rules);
  REQUIRE(pairs.size() == 3000);
  std::size_t identity = 0, y_initial = 0;
  const std::set<char32_t> alphabet(synthetic_alphabet().begin(), synthetic_alphabet().end());
  for (const CognatePair& p : pairs) {
    CHECK(p.target == oracle_transduce(p.source, rules));
    CHECK(p.source.size() >= 2);
    CHECK(p.source.size() <= 12);
    for (char32_t c : p.source) CHECK(alphabet.count(c));
    identity += p.source == p.target;
    if (p.source.front() == U'y') {
      ++y_initial;
      CHECK(p.target.front() == U'j');
    }
  }
  CHECK(identity >= 300);
  CHECK(y_initial > 0);
  CHECK(generate_pairs(7, 3000, rules) == pairs);
  CHECK(generate_pairs(8, 3000, rules) != pairs);

  const Ruleset same{rule(Anchor::kAnywhere, U"a", U"a")};
  for (const CognatePair& p : generate_pairs(3, 200, same)) CHECK(p.source == p.target);
  CHECK_THROWS_AS(generate_pairs(1, 10, Ruleset{}), InvalidArgument);
  CHECK_THROWS_AS(generate_pairs(1, 0, rules), InvalidArgument);
}

TEST_CASE("subword vectors", "[synthetic]") {
  const std::vector<GraphemeString> words{U"kama", U"kami", U"xyz"};
  const WordVectorStore a = subword_vectors(words, 16, 5);
  const WordVectorStore b = subword_vectors(words, 16, 5);
  CHECK(a.size() == 3);
  CHECK(a.dim() == 16);
  CHECK(a.vectors() == b.vectors());
  auto dot = [&](const GraphemeString& x, const GraphemeString& y) {
    double s = 0;
    for (std::size_t i = 0; i < 16; ++i) s += (*a.find(x))[i] * (*a.find(y))[i];
    return s;
  };
  CHECK(dot(U"kama", U"kama") == Catch::Approx(1.0));
  CHECK(dot(U"kama", U"kami") > dot(U"kama", U"xyz"));
}

TEST_CASE("synthetic MT corpus", "[synthetic]") {
  SyntheticMtConfig cfg;
  cfg.sentences = 100;
  const SyntheticMtCorpus mt = generate_mt_corpus(cfg, default_ruleset());
  REQUIRE(mt.records.size() == 100);
  CHECK(mt.total_tokens > 0);
  const double rate = static_cast<double>(mt.oov_tokens) / static_cast<double>(mt.total_tokens);
  CHECK(rate > 0.1);
  CHECK(rate < 0.3);
  for (const PipelineRecord& r : mt.records) {
    CHECK(r.source.size() >= cfg.min_tokens);
    CHECK(r.source.size() <= cfg.max_tokens);
    CHECK(r.attention.rows() == r.baseline.size());
    CHECK(r.attention.cols() == r.source.size());
    CHECK_NOTHROW(align_from_attention(r.attention));
    CHECK(r.reference.size() == r.source.size());
  }
  const SyntheticMtCorpus again = generate_mt_corpus(cfg, default_ruleset());
  CHECK(again.records[5].baseline == mt.records[5].baseline);
  CHECK(again.monolingual == mt.monolingual);
}
