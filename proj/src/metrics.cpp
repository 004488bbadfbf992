// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

std::vector<std::size_t> distance_table(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
      at(i, j) = std::min({sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  return d;
}

template <typename Seq>
std::map<Seq, std::size_t> ngram_counts(const std::vector<typename Seq::value_type>& items,
                                        std::size_t n) {
  std::map<Seq, std::size_t> counts;
  for (std::size_t i = 0; i + n <= items.size(); ++i) {
    ++counts[Seq(items.begin() + i, items.begin() + i + n)];
  }
  return counts;
}

template <typename Seq>
std::size_t clipped_matches(const std::map<Seq, std::size_t>& pred,
                            const std::map<Seq, std::size_t>& ref) {
  std::size_t total = 0;
  for (const auto& [gram, count] : pred) {
    auto it = ref.find(gram);
    if (it != ref.end()) total += std::min(count, it->second);
  }
  return total;
}

double brevity_penalty(double pred_len, double ref_len) {
  if (pred_len <= 0) return 0.0;
  return pred_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / pred_len);
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  return distance_table(a, b).back();
}

std::vector<EditStep> edit_script(std::u32string_view a, std::u32string_view b) {
  const std::size_t m = b.size();
  std::vector<std::size_t> d = distance_table(a, b);
  auto at = [&](std::size_t i, std::size_t j) { return d[i * (m + 1) + j]; };
  std::vector<EditStep> steps;
  std::size_t i = a.size(), j = b.size();
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)) {
      steps.push_back({a[i - 1] == b[j - 1] ? EditOp::kMatch : EditOp::kSubstitute, i - 1, j - 1});
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      steps.push_back({EditOp::kDelete, i - 1, j});
      --i;
    } else {
      steps.push_back({EditOp::kInsert, i, j - 1});
      --j;
    }
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

double string_similarity(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 100.0;
  return (1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(total)) * 100.0;
}

double word_accuracy(std::span<const GraphemeString> predictions,
                     std::span<const GraphemeString> golds) {
  if (predictions.size() != golds.size()) {
    throw InvalidArgument("word_accuracy: prediction and gold counts differ");
  }
  if (golds.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) hits += predictions[i] == golds[i] ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(golds.size());
}

double char_bleu(std::u32string_view prediction, std::u32string_view reference,
                 std::size_t max_n) {
  if (reference.empty()) throw InvalidArgument("char_bleu: empty reference");
  if (max_n == 0) throw InvalidArgument("char_bleu: max_n must be >= 1");
  const std::vector<char32_t> pred(prediction.begin(), prediction.end());
  const std::vector<char32_t> ref(reference.begin(), reference.end());
  double log_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (n > pred.size() && n > ref.size()) break;
    const auto p = ngram_counts<std::u32string>(pred, n);
    const auto r = ngram_counts<std::u32string>(ref, n);
    const std::size_t total = pred.size() >= n ? pred.size() - n + 1 : 0;
    const std::size_t hits = clipped_matches(p, r);
    if (hits == 0) return 0.0;
    log_sum += std::log(static_cast<double>(hits) / static_cast<double>(total));
    ++orders;
  }
  if (orders == 0) return 0.0;
  return 100.0 * brevity_penalty(static_cast<double>(pred.size()),
                                 static_cast<double>(ref.size())) *
         std::exp(log_sum / static_cast<double>(orders));
}

double corpus_bleu(std::span<const Sentence> predictions, std::span<const Sentence> references,
                   std::size_t max_n) {
  if (predictions.size() != references.size()) {
    throw InvalidArgument("corpus_bleu: prediction and reference counts differ");
  }
  if (max_n == 0) throw InvalidArgument("corpus_bleu: max_n must be >= 1");
  std::vector<std::size_t> hits(max_n, 0), totals(max_n, 0);
  std::size_t pred_len = 0, ref_len = 0;
  for (std::size_t s = 0; s < predictions.size(); ++s) {
    const Sentence& p = predictions[s];
    const Sentence& r = references[s];
    pred_len += p.size();
    ref_len += r.size();
    for (std::size_t n = 1; n <= max_n; ++n) {
      hits[n - 1] += clipped_matches(ngram_counts<Sentence>(p, n), ngram_counts<Sentence>(r, n));
      totals[n - 1] += p.size() >= n ? p.size() - n + 1 : 0;
    }
  }
  double log_sum = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (hits[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(hits[n]) / static_cast<double>(totals[n]));
  }
  return 100.0 * brevity_penalty(static_cast<double>(pred_len), static_cast<double>(ref_len)) *
         std::exp(log_sum / static_cast<double>(max_n));
}

EvalReport evaluate(std::span<const CognatePair> gold,
                    std::span<const GraphemeString> predictions) {
  if (gold.size() != predictions.size()) {
    throw InvalidArgument("evaluate: prediction and gold counts differ");
  }
  EvalReport report;
  report.n_items = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ItemRecord item;
    item.source = gold[i].source;
    item.gold = gold[i].target;
    item.prediction = predictions[i];
    item.ss = string_similarity(item.prediction, item.gold);
    item.correct = item.prediction == item.gold;
    item.bleu = item.gold.empty() ? (item.prediction.empty() ? 100.0 : 0.0)
                                  : char_bleu(item.prediction, item.gold);
    report.bleu += item.bleu;
    report.ss += item.ss;
    report.wa += item.correct ? 100.0 : 0.0;
    report.items.push_back(std::move(item));
  }
  if (report.n_items > 0) {
    const double n = static_cast<double>(report.n_items);
    report.bleu /= n;
    report.ss /= n;
    report.wa /= n;
  }
  return report;
}

}  // namespace cogtrans
