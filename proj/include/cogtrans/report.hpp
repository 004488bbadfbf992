// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogtrans/metrics.hpp"
#include "cogtrans/trainer.hpp"

namespace cogtrans {

// Fills every item's tags from classify_errors.
void annotate_errors(EvalReport& report, Script script);

// One line per item (source, gold, prediction, ss, wa, bleu, tags) and a
// "#"-prefixed aggregate footer.
void write_report_tsv(std::ostream& out, const EvalReport& report);
void save_report_tsv(const std::filesystem::path& path, const EvalReport& report);
// Reads back the per-item lines and recomputes the aggregates.
EvalReport read_report_tsv(std::istream& in);

// Metrics as rows, one column per named model.
std::string format_summary(std::span<const std::pair<std::string, EvalReport>> models);

// Per-epoch losses and validation metrics.
void write_history_tsv(std::ostream& out, std::span<const EpochRecord> history);

}  // namespace cogtrans
