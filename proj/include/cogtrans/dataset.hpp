// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "cogtrans/text.hpp"

namespace cogtrans {

struct DatasetSplit {
  std::vector<CognatePair> train;
  std::vector<CognatePair> validation;
  std::vector<CognatePair> test;
  std::uint64_t seed = 0;
};

// Lines "source<TAB>target", NFC-normalised. Blank lines are skipped and
// duplicates kept. Throws ParseError with the 1-based line number.
std::vector<CognatePair> read_cognate_tsv(std::istream& in);
std::vector<CognatePair> load_cognate_tsv(const std::filesystem::path& path);

void write_cognate_tsv(std::ostream& out, std::span<const CognatePair> pairs);
void save_cognate_tsv(const std::filesystem::path& path, std::span<const CognatePair> pairs);

// Seeded shuffle, then floor(n / 4) pairs to test and floor(rest / 10) to
// validation; the remainder trains. Needs at least 4 pairs.
DatasetSplit split_dataset(std::span<const CognatePair> pairs, std::uint64_t seed);

// Moves round(fraction * |train|) shuffled training pairs into validation.
void carve_validation(DatasetSplit& split, double fraction, std::uint64_t seed);

}  // namespace cogtrans
