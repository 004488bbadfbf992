// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "cogtrans/errors.hpp"
#include "cogtrans/tensor.hpp"

namespace cogtrans {
namespace {

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

}  // namespace

std::vector<CognatePair> read_cognate_tsv(std::istream& in) {
  std::vector<CognatePair> pairs;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(number, "expected source<TAB>target");
    if (line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(number, "more than two columns");
    }
    try {
      CognatePair p{graphemes(line.substr(0, tab)), graphemes(line.substr(tab + 1))};
      if (p.source.empty() || p.target.empty()) throw ParseError(number, "empty column");
      pairs.push_back(std::move(p));
    } catch (const InvalidArgument& e) {
      throw ParseError(number, e.what());
    }
  }
  return pairs;
}

std::vector<CognatePair> load_cognate_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return read_cognate_tsv(in);
}

void write_cognate_tsv(std::ostream& out, std::span<const CognatePair> pairs) {
  for (const CognatePair& p : pairs) out << to_utf8(p.source) << '\t' << to_utf8(p.target) << '\n';
}

void save_cognate_tsv(const std::filesystem::path& path, std::span<const CognatePair> pairs) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  write_cognate_tsv(out, pairs);
}

DatasetSplit split_dataset(std::span<const CognatePair> pairs, std::uint64_t seed) {
  if (pairs.size() < 4) throw InvalidArgument("split_dataset needs at least 4 pairs");
  std::vector<CognatePair> shuffled(pairs.begin(), pairs.end());
  Rng rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::size_t n = shuffled.size();
  const std::size_t n_test = n / 4;
  const std::size_t rest = n - n_test;
  const std::size_t n_val = rest / 10;
  DatasetSplit split;
  split.seed = seed;
  auto it = shuffled.begin();
  split.train.assign(std::make_move_iterator(it), std::make_move_iterator(it + (rest - n_val)));
  it += rest - n_val;
  split.validation.assign(std::make_move_iterator(it), std::make_move_iterator(it + n_val));
  it += n_val;
  split.test.assign(std::make_move_iterator(it), std::make_move_iterator(shuffled.end()));
  return split;
}

void carve_validation(DatasetSplit& split, double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) throw InvalidArgument("val_fraction must be in [0, 1)");
  Rng rng(seed);
  std::shuffle(split.train.begin(), split.train.end(), rng);
  const std::size_t n_val = round_half_up(fraction * static_cast<double>(split.train.size()));
  split.validation.insert(split.validation.end(),
                          std::make_move_iterator(split.train.end() - n_val),
                          std::make_move_iterator(split.train.end()));
  split.train.resize(split.train.size() - n_val);
}

}  // namespace cogtrans
