// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

const std::u32string kConsonants = U"kKgGcCjJtTdDwWxXnpPbBmyrlvSsh";
const std::u32string kVowels = U"aAiIuUeEoO";

GraphemeString random_word(std::size_t length, Rng& rng) {
  std::uniform_int_distribution<std::size_t> cons(0, kConsonants.size() - 1);
  std::uniform_int_distribution<std::size_t> vow(0, kVowels.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GraphemeString w;
  if (u(rng) < 0.1) w.push_back(kVowels[vow(rng)]);
  while (w.size() < length) {
    w.push_back(kConsonants[cons(rng)]);
    w.push_back(kVowels[vow(rng)]);
    if (u(rng) < 0.12) w.push_back(U'M');
  }
  w.resize(length);
  return w;
}

std::uint64_t hash_ngram(const std::u32string& gram, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (char32_t c : gram) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Ruleset default_ruleset() {
  return {
      {Anchor::kInitial, U"y", U"j", 1.0},
      {Anchor::kFinal, U"nA", U"lA", 1.0},
      {Anchor::kAnywhere, U"M", U"n", 1.0},
  };
}

const std::u32string& synthetic_alphabet() {
  static const std::u32string alphabet = kConsonants + kVowels + U"M";
  return alphabet;
}

GraphemeString apply_rule(const GraphemeString& word, const RewriteRule& rule) {
  if (rule.from.empty()) throw InvalidArgument("rewrite rule with an empty pattern");
  switch (rule.anchor) {
    case Anchor::kInitial:
      if (word.rfind(rule.from, 0) == 0) return rule.to + word.substr(rule.from.size());
      return word;
    case Anchor::kFinal:
      if (word.size() >= rule.from.size() &&
          word.compare(word.size() - rule.from.size(), rule.from.size(), rule.from) == 0) {
        return word.substr(0, word.size() - rule.from.size()) + rule.to;
      }
      return word;
    case Anchor::kAnywhere: {
      GraphemeString out;
      std::size_t i = 0;
      while (i < word.size()) {
        if (word.compare(i, rule.from.size(), rule.from) == 0) {
          out += rule.to;
          i += rule.from.size();
        } else {
          out.push_back(word[i++]);
        }
      }
      return out;
    }
  }
  return word;
}

GraphemeString oracle_transduce(const GraphemeString& word, const Ruleset& rules) {
  GraphemeString out = word;
  for (const RewriteRule& r : rules) {
    if (r.probability != 1.0) throw InvalidArgument("oracle needs deterministic rules");
    out = apply_rule(out, r);
  }
  return out;
}

std::vector<CognatePair> generate_pairs(std::uint64_t seed, std::size_t n, const Ruleset& rules,
                                        const GeneratorConfig& cfg) {
  if (n == 0) throw InvalidArgument("generate_pairs needs n >= 1");
  if (rules.empty()) throw InvalidArgument("empty ruleset");
  if (cfg.min_length < 1 || cfg.max_length < cfg.min_length) {
    throw InvalidArgument("bad word length range");
  }
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> len(cfg.min_length, cfg.max_length);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto apply = [&](const GraphemeString& w) {
    GraphemeString out = w;
    for (const RewriteRule& r : rules) {
      if (r.probability >= 1.0 || u(rng) < r.probability) out = apply_rule(out, r);
    }
    return out;
  };
  const std::size_t n_identity =
      static_cast<std::size_t>(std::llround(cfg.identity_fraction * static_cast<double>(n)));
  std::vector<CognatePair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool identity = i < n_identity;
    GraphemeString w;
    GraphemeString t;
    for (int attempt = 0;; ++attempt) {
      w = random_word(len(rng), rng);
      if (!identity) {
        for (const RewriteRule& r : rules) {
          if (u(rng) >= cfg.plant_probability || r.from.size() > w.size()) continue;
          switch (r.anchor) {
            case Anchor::kInitial: w.replace(0, r.from.size(), r.from); break;
            case Anchor::kFinal: w.replace(w.size() - r.from.size(), r.from.size(), r.from); break;
            case Anchor::kAnywhere: {
              std::uniform_int_distribution<std::size_t> at(0, w.size() - r.from.size());
              w.replace(at(rng), r.from.size(), r.from);
              break;
            }
          }
        }
        t = apply(w);
        break;
      }
      t = apply(w);
      if (t == w || attempt > 1000) break;
    }
    pairs.push_back({std::move(w), std::move(t)});
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

WordVectorStore subword_vectors(std::span<const GraphemeString> words, std::size_t dim,
                                std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("vector dimension must be >= 1");
  std::map<std::u32string, std::vector<double>> grams;
  auto gram_vector = [&](const std::u32string& g) -> const std::vector<double>& {
    auto it = grams.find(g);
    if (it != grams.end()) return it->second;
    Rng rng(hash_ngram(g, seed));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(dim);
    for (double& x : v) x = normal(rng);
    return grams.emplace(g, std::move(v)).first->second;
  };
  WordVectorStore store;
  std::set<GraphemeString> seen;
  for (const GraphemeString& w : words) {
    if (!seen.insert(w).second) continue;
    const std::u32string padded = U"<" + w + U">";
    std::vector<double> v(dim, 0.0);
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        const std::vector<double>& g = gram_vector(padded.substr(i, n));
        for (std::size_t k = 0; k < dim; ++k) v[k] += g[k];
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    store.add(w, std::move(v));
  }
  return store;
}

SyntheticMtCorpus generate_mt_corpus(const SyntheticMtConfig& cfg, const Ruleset& rules) {
  if (cfg.sentences == 0 || cfg.min_tokens == 0 || cfg.max_tokens < cfg.min_tokens) {
    throw InvalidArgument("bad synthetic corpus sizes");
  }
  SyntheticMtCorpus corpus;
  std::set<GraphemeString> used;
  auto take_unique = [&](std::uint64_t seed, std::size_t n) {
    std::vector<CognatePair> out;
    for (std::uint64_t round = 0; out.size() < n; ++round) {
      for (CognatePair& p : generate_pairs(seed * 1000003 + round, n, rules)) {
        if (out.size() == n) break;
        if (used.insert(p.source).second) out.push_back(std::move(p));
      }
    }
    return out;
  };
  corpus.frequent = take_unique(cfg.seed, cfg.frequent_words);
  corpus.rare = take_unique(cfg.seed + 1, cfg.rare_words);

  Rng rng(cfg.seed);
  // Zipf-like weights for the monolingual corpus; every frequent word occurs.
  std::vector<double> weights(corpus.frequent.size());
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> zipf(weights.begin(), weights.end());
  for (const CognatePair& p : corpus.frequent) corpus.monolingual.push_back(to_utf8(p.source));
  while (corpus.monolingual.size() < cfg.monolingual_tokens) {
    corpus.monolingual.push_back(to_utf8(corpus.frequent[zipf(rng)].source));
  }

  std::uniform_int_distribution<std::size_t> length(cfg.min_tokens, cfg.max_tokens);
  std::uniform_int_distribution<std::size_t> pick_rare(0, corpus.rare.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t s = 0; s < cfg.sentences; ++s) {
    PipelineRecord r;
    const std::size_t n = length(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const bool oov = u(rng) < cfg.oov_rate;
      const CognatePair& p = oov ? corpus.rare[pick_rare(rng)] : corpus.frequent[zipf(rng)];
      r.source.push_back(to_utf8(p.source));
      r.reference.push_back(to_utf8(p.target));
      r.baseline.push_back(to_utf8(oov ? p.source : p.target));
      corpus.oov_tokens += oov ? 1 : 0;
    }
    corpus.total_tokens += n;
    if (u(rng) < 0.5) {
      for (auto* side : {&r.source, &r.reference, &r.baseline}) side->back() += "।";
    }
    r.attention = Tensor({n, n});
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double w = (i == j ? 4.0 : 0.0) + u(rng) * 0.5;
        r.attention(i, j) = w;
        total += w;
      }
      for (std::size_t j = 0; j < n; ++j) r.attention(i, j) /= total;
    }
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

}  // namespace cogtrans
