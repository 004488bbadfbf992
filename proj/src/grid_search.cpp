// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/grid_search.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

#include "cogtrans/dataset.hpp"
#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

GridCell run_cell(const RunConfig& fixed, std::vector<std::pair<std::string, std::string>> settings,
                  std::span<const CognatePair> pool, std::size_t index) {
  GridCell cell;
  cell.settings = std::move(settings);
  RunConfig cfg = fixed;
  try {
    for (const auto& [k, v] : cell.settings) apply_setting(cfg, k, v);
    if (cfg.model.architecture == Architecture::kTransformer) {
      for (const auto& [k, v] : cell.settings) {
        if (k == "model.cell") throw InvalidArgument("the transformer has no recurrent cell");
      }
    }
    validate(cfg.model);
    if (cfg.train.batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  } catch (const InvalidArgument& e) {
    cell.skipped = true;
    cell.reason = e.what();
    return cell;
  }
  cfg.train.seed = fixed.train.seed * 1000003ULL + index;
  cfg.train.on_epoch = nullptr;
  DatasetSplit split;
  split.train.assign(pool.begin(), pool.end());
  carve_validation(split, cfg.train.val_fraction > 0 ? cfg.train.val_fraction : 0.1,
                   cfg.train.seed);
  try {
    TrainResult r = train(cfg.model, cfg.train, cfg.optimizer, std::move(split));
    cell.metrics = r.best.metrics;
    cell.val_loss = r.best.val_loss;
    cell.best_epoch = r.best.epoch;
    cell.epochs_run = r.history.size();
  } catch (const DivergedError& e) {
    cell.diverged = true;
    cell.reason = e.what();
  }
  return cell;
}

}  // namespace

GridAxis parse_grid_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw InvalidArgument("grid axis must look like key=v1,v2: " + spec);
  }
  GridAxis axis;
  axis.key = spec.substr(0, eq);
  std::stringstream values(spec.substr(eq + 1));
  for (std::string v; std::getline(values, v, ',');) {
    if (!v.empty()) axis.values.push_back(v);
  }
  if (axis.values.empty()) throw InvalidArgument("grid axis without values: " + spec);
  return axis;
}

std::vector<GridCell> grid_search(const GridSpace& space, const RunConfig& fixed,
                                  std::span<const CognatePair> pool, std::size_t threads) {
  if (space.empty()) throw InvalidArgument("empty search space");
  if (pool.size() < 2) throw EmptyInput("grid search needs at least two pairs");
  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const GridAxis& axis : space) {
    if (axis.values.empty()) throw InvalidArgument("axis '" + axis.key + "' has no values");
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& c : combos) {
      for (const std::string& v : axis.values) {
        auto extended = c;
        extended.emplace_back(axis.key, v);
        next.push_back(std::move(extended));
      }
    }
    combos = std::move(next);
  }
  std::vector<GridCell> cells(combos.size());
  std::atomic<std::size_t> next_index{0};
  auto worker = [&] {
    for (std::size_t i; (i = next_index.fetch_add(1)) < combos.size();) {
      cells[i] = run_cell(fixed, combos[i], pool, i);
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(threads, combos.size()));
  std::vector<std::thread> pool_threads;
  for (std::size_t t = 1; t < n; ++t) pool_threads.emplace_back(worker);
  worker();
  for (std::thread& t : pool_threads) t.join();
  return cells;
}

std::string format_grid_table(std::span<const GridCell> cells) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  if (!cells.empty()) {
    for (const auto& [k, v] : cells.front().settings) out << k << '\t';
  }
  out << "BLEU\tSS\tWA\tep\tnote\n";
  for (const GridCell& c : cells) {
    for (const auto& [k, v] : c.settings) out << v << '\t';
    if (c.skipped) {
      out << "-\t-\t-\t-\tskipped: " << c.reason << '\n';
    } else if (c.diverged) {
      out << "-\t-\t-\t-\tModel broken (" << c.reason << ")\n";
    } else {
      out << c.metrics.bleu << '\t' << c.metrics.ss << '\t' << c.metrics.wa << '\t'
          << c.best_epoch << '\t' << '\n';
    }
  }
  return out.str();
}

}  // namespace cogtrans
