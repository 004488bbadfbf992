// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cogtrans/models.hpp"
#include "cogtrans/optimizer.hpp"
#include "cogtrans/trainer.hpp"

namespace cogtrans {

struct RunConfig {
  std::filesystem::path data;
  std::filesystem::path vectors;
  std::filesystem::path embeddings;
  std::filesystem::path checkpoints;
  std::filesystem::path reports;
  ModelConfig model;
  TrainConfig train;
  OptimizerSpec optimizer;
  Script script = Script::kRaw;
  std::uint64_t split_seed = 1;
  // Snapshots averaged into the saved model; 0 saves the best checkpoint.
  std::size_t average_last = 0;
};

// Default checkpoint directory: $COGTRANS_CHECKPOINT_DIR, else "checkpoints".
std::filesystem::path default_checkpoint_dir();

// Sets "section.key" (for example "model.hidden_dim" or "optimizer.lr").
// Throws InvalidArgument for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Line-oriented "key = value" with "[section]" headers and '#' comments.
// Relative paths resolve against `base_dir`. Throws ParseError.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = {});
// Also checks that the data, vectors and embeddings paths exist.
RunConfig load_run_config(const std::filesystem::path& path);

// Every key apply_setting accepts, in "section.key" form.
std::vector<std::string> setting_keys();

}  // namespace cogtrans
