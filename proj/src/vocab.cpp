// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/vocab.hpp"

#include <algorithm>
#include <set>

#include "cogtrans/errors.hpp"

namespace cogtrans {

CharVocab::CharVocab(std::vector<char32_t> symbols) : symbols_(std::move(symbols)) {
  std::sort(symbols_.begin(), symbols_.end());
  symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
  for (std::size_t i = 0; i < symbols_.size(); ++i) index_[symbols_[i]] = kNumSpecials + i;
}

std::size_t CharVocab::id(char32_t c) const {
  auto it = index_.find(c);
  return it == index_.end() ? kUnk : it->second;
}

char32_t CharVocab::symbol(std::size_t id) const {
  if (id < kNumSpecials || id >= size()) {
    throw IndexError("id " + std::to_string(id) + " has no symbol");
  }
  return symbols_[id - kNumSpecials];
}

std::vector<std::size_t> CharVocab::encode(std::u32string_view word) const {
  std::vector<std::size_t> ids;
  ids.reserve(word.size());
  for (char32_t c : word) ids.push_back(id(c));
  return ids;
}

GraphemeString CharVocab::decode(std::span<const std::size_t> ids) const {
  GraphemeString out;
  for (std::size_t id : ids) {
    if (id == kEos) break;
    if (id < kNumSpecials || id >= size()) continue;
    out.push_back(symbols_[id - kNumSpecials]);
  }
  return out;
}

CharVocab build_vocab(std::span<const CognatePair> corpus) {
  std::set<char32_t> seen;
  for (const CognatePair& p : corpus) {
    seen.insert(p.source.begin(), p.source.end());
    seen.insert(p.target.begin(), p.target.end());
  }
  return CharVocab(std::vector<char32_t>(seen.begin(), seen.end()));
}

}  // namespace cogtrans
