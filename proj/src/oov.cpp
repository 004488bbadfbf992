// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/oov.hpp"

#include <algorithm>
#include <cctype>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "cogtrans/error_taxonomy.hpp"
#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

bool is_punct(char32_t c) {
  return c == U'।' || c == U'॥' || (c < 0x80 && std::ispunct(static_cast<int>(c)));
}

std::string join(std::span<const std::string> tokens, char sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(sep);
    out += tokens[i];
  }
  return out;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    const int c = in.get();
    if (c == EOF) throw ParseError(0, "matrix file truncated");
    v |= static_cast<std::uint32_t>(c) << (8 * i);
  }
  return v;
}

}  // namespace

FrequencyShortlist::FrequencyShortlist(std::vector<std::pair<std::string, std::size_t>> ranked,
                                       std::size_t k)
    : ranked_(std::move(ranked)), k_(k) {
  for (const auto& [w, c] : ranked_) members_.insert(w);
}

FrequencyShortlist build_shortlist(std::span<const std::string> tokens, std::size_t k) {
  if (k == 0) throw InvalidArgument("shortlist size must be >= 1");
  std::map<std::string, std::size_t> counts;
  for (const std::string& t : tokens) {
    const std::string core = split_punctuation(t).core;
    if (!core.empty()) ++counts[core];
  }
  if (counts.empty()) throw EmptyInput("shortlist corpus has no words");
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);
  return FrequencyShortlist(std::move(ranked), k);
}

std::vector<std::string> tokenize(const std::string& sentence) {
  std::istringstream in(sentence);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

std::string detokenize(std::span<const std::string> tokens) { return join(tokens, ' '); }

TokenParts split_punctuation(const std::string& token) {
  const std::u32string s = utf8_to_u32(token);
  std::size_t b = 0, e = s.size();
  while (b < e && is_punct(s[b])) ++b;
  while (e > b && is_punct(s[e - 1])) --e;
  return {to_utf8(s.substr(0, b)), to_utf8(s.substr(b, e - b)), to_utf8(s.substr(e))};
}

std::set<std::size_t> detect_oov(std::span<const std::string> tokens,
                                 const FrequencyShortlist& shortlist) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string core = split_punctuation(tokens[i]).core;
    if (!core.empty() && !shortlist.contains(core)) out.insert(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> align_from_attention(const AttentionMatrix& att) {
  const std::size_t rows = att.shape.empty() ? 0 : att.rows(), cols = att.cols();
  std::vector<std::vector<std::size_t>> out(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    std::size_t best = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double a = att(i, j);
      if (!(a >= 0.0)) throw InvalidAttention("row " + std::to_string(i) + " has a negative entry");
      sum += a;
      if (a > att(i, best)) best = j;
    }
    if (std::abs(sum - 1.0) > 1e-3) {
      throw InvalidAttention("row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
    out[best].push_back(i);
  }
  return out;
}

Correction correct_translation(const AlignedSentencePair& pair, const std::set<std::size_t>& oov,
                               const WordTransducer& transducer) {
  Correction result;
  if (!pair.attention.shape.empty() && pair.attention.size() > 0 &&
      (pair.attention.rows() != pair.target.size() ||
       pair.attention.cols() != pair.source.size())) {
    throw InvalidAttention("attention is " + shape_string(pair.attention.shape) + " for " +
                           std::to_string(pair.target.size()) + " target and " +
                           std::to_string(pair.source.size()) + " source tokens");
  }
  std::vector<std::vector<std::size_t>> aligned =
      oov.empty() ? std::vector<std::vector<std::size_t>>(pair.source.size())
                  : align_from_attention(pair.attention);
  std::vector<std::string> out = pair.target;
  std::vector<bool> drop(out.size(), false);
  for (std::size_t j : oov) {
    if (j >= pair.source.size()) throw IndexError("OOV position out of range");
    const std::vector<std::size_t>& rows = aligned[j];
    const TokenParts src = split_punctuation(pair.source[j]);
    if (rows.empty()) {
      result.log.push_back("unaligned OOV word '" + src.core + "' at " + std::to_string(j));
      continue;
    }
    GraphemeString word;
    try {
      word = transducer(graphemes(src.core));
    } catch (const std::exception& e) {
      result.log.push_back("could not transduce '" + src.core + "': " + e.what());
      continue;
    }
    const TokenParts first = split_punctuation(pair.target[rows.front()]);
    const TokenParts last = split_punctuation(pair.target[rows.back()]);
    out[rows.front()] = first.lead + to_utf8(word) + last.trail;
    for (std::size_t k = 1; k < rows.size(); ++k) drop[rows[k]] = true;
    result.replaced_source.push_back(j);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!drop[i]) result.tokens.push_back(std::move(out[i]));
  }
  return result;
}

WordTransducer model_transducer(const TransductionModel& model, Script script) {
  const bool han = model.config().architecture == Architecture::kHierarchical;
  return [&model, script, han](const GraphemeString& word) {
    GraphemeString out = model.transduce(word).word;
    return han ? strip_trailing_repeats(out, script) : out;
  };
}

std::vector<Correction> correct_corpus(std::span<const PipelineRecord> corpus,
                                       const FrequencyShortlist& shortlist,
                                       const WordTransducer& transducer) {
  std::vector<Correction> out;
  out.reserve(corpus.size());
  for (const PipelineRecord& r : corpus) {
    AlignedSentencePair pair{r.source, r.baseline, r.attention};
    out.push_back(correct_translation(pair, detect_oov(r.source, shortlist), transducer));
  }
  return out;
}

std::vector<PipelineRow> evaluate_pipeline(std::span<const PipelineRecord> corpus,
                                           std::span<const std::string> monolingual,
                                           std::span<const std::size_t> shortlist_sizes,
                                           const WordTransducer& transducer) {
  std::vector<Sentence> refs, baseline;
  for (const PipelineRecord& r : corpus) {
    if (r.reference.empty()) throw InvalidArgument("pipeline record without a reference");
    refs.push_back(r.reference);
    baseline.push_back(r.baseline);
  }
  const double base = corpus_bleu(baseline, refs);
  std::vector<PipelineRow> rows;
  for (std::size_t k : shortlist_sizes) {
    const FrequencyShortlist shortlist = build_shortlist(monolingual, k);
    std::vector<Sentence> corrected;
    PipelineRow row;
    row.k = k;
    for (Correction& c : correct_corpus(corpus, shortlist, transducer)) {
      row.replaced += c.replaced_source.size();
      corrected.push_back(std::move(c.tokens));
    }
    row.baseline_bleu = base;
    row.corrected_bleu = corpus_bleu(corrected, refs);
    row.delta = row.corrected_bleu - row.baseline_bleu;
    rows.push_back(row);
  }
  return rows;
}

std::vector<PipelineRecord> load_pipeline(const std::filesystem::path& tsv,
                                          const std::filesystem::path& matrices) {
  std::ifstream text(tsv);
  if (!text) throw InvalidArgument("cannot open " + tsv.string());
  std::ifstream bin(matrices, std::ios::binary);
  if (!bin) throw InvalidArgument("cannot open " + matrices.string());
  std::vector<PipelineRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(text, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      cols.push_back(line.substr(start, tab - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() < 2 || cols.size() > 3) {
      throw ParseError(number, "expected source<TAB>baseline[<TAB>reference]");
    }
    PipelineRecord r;
    r.source = tokenize(cols[0]);
    r.baseline = tokenize(cols[1]);
    if (cols.size() == 3) r.reference = tokenize(cols[2]);
    const std::uint32_t rows = get_u32(bin), ncols = get_u32(bin);
    if (rows != r.baseline.size() || ncols != r.source.size()) {
      throw ParseError(number, "attention matrix is " + std::to_string(rows) + "x" +
                                   std::to_string(ncols) + ", tokens need " +
                                   std::to_string(r.baseline.size()) + "x" +
                                   std::to_string(r.source.size()));
    }
    r.attention = Tensor({rows, ncols});
    for (double& x : r.attention.data) {
      std::uint64_t bits = get_u32(bin);
      bits |= static_cast<std::uint64_t>(get_u32(bin)) << 32;
      x = std::bit_cast<double>(bits);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void save_pipeline(std::span<const PipelineRecord> corpus, const std::filesystem::path& tsv,
                   const std::filesystem::path& matrices) {
  std::ofstream text(tsv);
  std::ofstream bin(matrices, std::ios::binary);
  if (!text || !bin) throw InvalidArgument("cannot write pipeline files");
  for (const PipelineRecord& r : corpus) {
    text << detokenize(r.source) << '\t' << detokenize(r.baseline);
    if (!r.reference.empty()) text << '\t' << detokenize(r.reference);
    text << '\n';
    put_u32(bin, static_cast<std::uint32_t>(r.attention.rows()));
    put_u32(bin, static_cast<std::uint32_t>(r.attention.cols()));
    for (double x : r.attention.data) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      put_u32(bin, static_cast<std::uint32_t>(bits & 0xffffffffu));
      put_u32(bin, static_cast<std::uint32_t>(bits >> 32));
    }
  }
}

void save_corrections(std::span<const PipelineRecord> corpus,
                      std::span<const Correction> corrections, const std::filesystem::path& tsv) {
  if (corpus.size() != corrections.size()) throw InvalidArgument("one correction per record");
  std::ofstream out(tsv);
  if (!out) throw InvalidArgument("cannot write " + tsv.string());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out << detokenize(corpus[i].source) << '\t' << detokenize(corpus[i].baseline) << '\t'
        << detokenize(corpus[i].reference) << '\t' << detokenize(corrections[i].tokens) << '\n';
  }
}

std::string format_pipeline_table(std::span<const PipelineRow> rows) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "shortlist\tbaseline_bleu\tcorrected_bleu\tdelta\treplaced\n";
  for (const PipelineRow& r : rows) {
    out << r.k << '\t' << r.baseline_bleu << '\t' << r.corrected_bleu << '\t' << r.delta << '\t'
        << r.replaced << '\n';
  }
  return out.str();
}

}  // namespace cogtrans
