// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "cogtrans/embeddings.hpp"
#include "cogtrans/errors.hpp"
#include "cogtrans/graph.hpp"

using namespace cogtrans;
using Catch::Approx;

namespace {

// Repeats the previous symbol with probability `stay`, over symbols a and b.
class MarkovPredictor : public CharPredictor {
 public:
  MarkovPredictor(const CharVocab& vocab, double stay) : vocab_(vocab), stay_(stay) {}
  std::size_t vocab_size() const override { return vocab_.size(); }
  std::size_t context_length() const override { return 1; }
  std::vector<double> predict(std::span<const std::size_t> context) const override {
    std::vector<double> p(vocab_.size(), 0.0);
    const std::size_t a = vocab_.id(U'a');
    const std::size_t b = vocab_.id(U'b');
    const bool prev_a = context.back() == a;
    p[a] = prev_a ? stay_ : 1.0 - stay_;
    p[b] = prev_a ? 1.0 - stay_ : stay_;
    return p;
  }

 private:
  CharVocab vocab_;
  double stay_;
};

// Uniform over the non-special symbols of a vocabulary.
class UniformPredictor : public CharPredictor {
 public:
  explicit UniformPredictor(std::size_t v) : v_(v) {}
  std::size_t vocab_size() const override { return v_; }
  std::size_t context_length() const override { return 3; }
  std::vector<double> predict(std::span<const std::size_t>) const override {
    const double symbols = static_cast<double>(v_ - CharVocab::kNumSpecials);
    std::vector<double> p(v_, 1.0 / symbols);
    for (std::size_t i = 0; i < CharVocab::kNumSpecials; ++i) p[i] = 0.0;
    return p;
  }

 private:
  std::size_t v_;
};

WordVectorStore store_of(std::initializer_list<std::pair<const char32_t*, std::vector<double>>> in) {
  WordVectorStore s;
  for (const auto& [w, v] : in) s.add(w, v);
  return s;
}

double row0(const FtAvgResult& r, const CharVocab& vocab, char32_t c) {
  return r.table.table(vocab.id(c), 0);
}

}  // namespace

TEST_CASE("ft-avg examples", "[ftavg]") {
  const CharVocab vocab({U'a', U'b', U'c', U'x'});
  SECTION("a character in one word takes that word's vector") {
    const auto s = store_of({{U"aaa", {7.0}}});
    CHECK(row0(ft_avg_embed(s, vocab), vocab, U'a') == 7.0);
  }
  SECTION("equal counts average") {
    const auto s = store_of({{U"ab", {2.0}}, {U"ac", {4.0}}});
    CHECK(row0(ft_avg_embed(s, vocab), vocab, U'a') == Approx(3.0));
  }
  SECTION("counts weight the mean") {
    const auto s = store_of({{U"aab", {0.0}}, {U"ac", {3.0}}});
    const FtAvgResult r = ft_avg_embed(s, vocab);
    CHECK(row0(r, vocab, U'a') == Approx(1.0));
    CHECK(row0(r, vocab, U'b') == 0.0);
    CHECK(row0(r, vocab, U'c') == 3.0);
    REQUIRE(r.missing.size() == 1);
    CHECK(r.missing[0] == U'x');
    for (std::size_t id = 0; id < CharVocab::kNumSpecials; ++id) CHECK(r.table.table(id, 0) == 0.0);
  }
  SECTION("corpus restricts the words and token weighting counts occurrences") {
    const auto s = store_of({{U"ab", {2.0}}, {U"ac", {4.0}}, {U"ax", {100.0}}});
    const std::vector<GraphemeString> corpus{U"ab", U"ab", U"ab", U"ac"};
    CHECK(row0(ft_avg_embed(s, vocab, corpus), vocab, U'a') == Approx(3.0));
    CHECK(row0(ft_avg_embed(s, vocab, corpus, true), vocab, U'a') == Approx(2.5));
  }
  SECTION("errors") {
    CHECK_THROWS_AS(ft_avg_embed(WordVectorStore{}, vocab), EmptyInput);
    WordVectorStore s;
    s.add(U"ab", {1.0, 2.0});
    CHECK_THROWS_AS(s.add(U"ac", {1.0}), InvalidShape);
    CHECK_THROWS_AS(s.add(U"ab", {1.0, 2.0}), InvalidArgument);
  }
}

TEST_CASE("ft-avg properties", "[ftavg]") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> letter(0, 4), len(1, 6);
  std::normal_distribution<double> normal;
  const std::vector<char32_t> alphabet{U'a', U'b', U'c', U'd', U'e'};
  const CharVocab vocab(alphabet);
  WordVectorStore store, scaled;
  const double lambda = -2.5;
  while (store.size() < 40) {
    GraphemeString w;
    for (int i = len(gen); i > 0; --i) w.push_back(alphabet[letter(gen)]);
    if (store.find(w) != nullptr) continue;
    std::vector<double> v(3);
    for (double& x : v) x = normal(gen);
    std::vector<double> sv = v;
    for (double& x : sv) x *= lambda;
    store.add(w, v);
    scaled.add(w, sv);
  }
  const FtAvgResult r = ft_avg_embed(store, vocab);
  const FtAvgResult rs = ft_avg_embed(scaled, vocab);
  for (char32_t c : alphabet) {
    const std::size_t id = vocab.id(c);
    for (std::size_t d = 0; d < 3; ++d) {
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& [w, v] : store.vectors()) {
        if (w.find(c) == GraphemeString::npos) continue;
        lo = std::min(lo, v[d]);
        hi = std::max(hi, v[d]);
      }
      CHECK(r.table.table(id, d) >= lo - 1e-12);
      CHECK(r.table.table(id, d) <= hi + 1e-12);
      CHECK(rs.table.table(id, d) == Approx(lambda * r.table.table(id, d)).margin(1e-12));
    }
  }
}

TEST_CASE("word vector files", "[ftavg]") {
  std::istringstream with_header("2 3\nab 1 2 3\ncd 4 5 6\n");
  const WordVectorStore s = read_word_vectors(with_header);
  CHECK(s.size() == 2);
  CHECK(s.dim() == 3);
  CHECK((*s.find(U"cd"))[2] == 6.0);
  std::istringstream plain("ab 1 2\n");
  CHECK(read_word_vectors(plain).dim() == 2);
}

TEST_CASE("remapping embeddings between vocabularies", "[ftavg]") {
  const CharVocab from({U'a', U'b'});
  const CharVocab to({U'b', U'z'});
  EmbeddingTable t;
  t.table = Tensor({from.size(), 2});
  t.table(from.id(U'b'), 0) = 5.0;
  const EmbeddingTable r = remap_embeddings(t, from, to);
  CHECK(r.table.shape == Shape({to.size(), 2}));
  CHECK(r.table(to.id(U'b'), 0) == 5.0);
  CHECK(r.table(to.id(U'z'), 0) == 0.0);
}

TEST_CASE("perplexity", "[lm]") {
  const CharVocab vocab({U'a', U'b', U'c', U'd'});
  SECTION("uniform predictor gives the vocabulary size") {
    CHECK(perplexity(UniformPredictor(vocab.size()), vocab, U"abcdabcdbbca") == Approx(4.0));
  }
  SECTION("two-symbol Markov predictor matches the closed form") {
    const MarkovPredictor lm(vocab, 0.8);
    const double nll = -(std::log(0.8) + 2.0 * std::log(0.2)) / 3.0;
    CHECK(perplexity(lm, vocab, U"aaba") == Approx(std::exp(nll)).epsilon(1e-9));
    CHECK(perplexity(MarkovPredictor(vocab, 1.0), vocab, U"aaaa") == Approx(1.0).epsilon(1e-9));
    CHECK(perplexity(lm, vocab, U"abab") >= 1.0);
  }
  SECTION("nothing to predict") {
    CHECK_THROWS_AS(perplexity(UniformPredictor(vocab.size()), vocab, U""), EmptyInput);
    CHECK_THROWS_AS(perplexity(UniformPredictor(vocab.size()), vocab, U"a"), EmptyInput);
  }
}

TEST_CASE("character language model", "[lm][slow]") {
  CharLMConfig cfg;
  cfg.window = 4;
  cfg.hidden = 16;
  cfg.embed_dim = 8;
  cfg.dropout = 0.0;
  cfg.batch_size = 32;
  cfg.max_epochs = 10;
  cfg.stride = 5;
  cfg.lr = 1e-2;

  SECTION("a periodic corpus becomes fully predictable") {
    std::u32string corpus;
    while (corpus.size() < 10000) corpus += U"abc";
    const CharLMResult r = train_char_lm(corpus, cfg);
    CHECK(r.perplexity == Approx(1.0).margin(0.05));
    CHECK(r.table.table.shape == Shape({r.vocab.size(), 8}));
    CHECK(r.table.trainable);
  }
  SECTION("a uniform random corpus stays near its alphabet size") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> pick(0, 3);
    std::u32string corpus;
    for (int i = 0; i < 6000; ++i) corpus.push_back(U"abcd"[pick(gen)]);
    cfg.max_epochs = 3;
    const CharLMResult r = train_char_lm(corpus, cfg);
    CHECK(r.perplexity == Approx(4.0).margin(0.3));
  }
  SECTION("short corpora and bad windows") {
    CHECK_THROWS_AS(train_char_lm(U"abcd", cfg), InvalidArgument);
    cfg.window = 1;
    CHECK_THROWS_AS(train_char_lm(U"abcabcabcabc", cfg), InvalidArgument);
  }
}
