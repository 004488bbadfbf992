// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogtrans/config.hpp"

namespace cogtrans {

struct GridAxis {
  std::string key;  // a RunConfig setting such as "model.hidden_dim"
  std::vector<std::string> values;
};

using GridSpace = std::vector<GridAxis>;

// Parses "key=v1,v2,...". Throws InvalidArgument.
GridAxis parse_grid_axis(const std::string& spec);

struct GridCell {
  std::vector<std::pair<std::string, std::string>> settings;
  bool skipped = false;   // the combination is not a valid configuration
  bool diverged = false;  // training broke down
  std::string reason;
  MetricSnapshot metrics;  // validation metrics at the best epoch
  double val_loss = 0.0;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
};

// One independent run per combination (cartesian product, last axis fastest).
// Each run draws a fresh validation split from `pool` and seeds from
// (fixed.train.seed, cell index). Up to `threads` runs go in parallel.
// Throws InvalidArgument for an empty space.
std::vector<GridCell> grid_search(const GridSpace& space, const RunConfig& fixed,
                                  std::span<const CognatePair> pool, std::size_t threads = 1);

// One row per cell: settings, BLEU, SS, WA and the best-epoch "ep" column.
std::string format_grid_table(std::span<const GridCell> cells);

}  // namespace cogtrans
