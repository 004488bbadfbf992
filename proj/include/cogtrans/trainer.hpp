// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "cogtrans/dataset.hpp"
#include "cogtrans/metrics.hpp"
#include "cogtrans/models.hpp"
#include "cogtrans/optimizer.hpp"

namespace cogtrans {

struct MetricSnapshot {
  double bleu = 0.0;
  double ss = 0.0;
  double wa = 0.0;

  bool operator==(const MetricSnapshot&) const = default;
};

struct Checkpoint {
  ModelConfig model;
  CharVocab vocab;
  ParamSet params;
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  MetricSnapshot metrics;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  MetricSnapshot metrics;  // on validation; zero when validation_metrics is off
};

struct TrainConfig {
  std::size_t batch_size = 8;
  std::size_t max_epochs = 50;
  // Epochs without a validation-loss improvement tolerated before stopping.
  std::size_t patience = 7;
  double l2 = 0.0;
  std::uint64_t seed = 1;
  // Used only when the split has no validation pairs.
  double val_fraction = 0.1;
  bool shuffle_each_epoch = true;
  // Snapshots kept for checkpoint averaging.
  std::size_t keep_last = 6;
  bool validation_metrics = true;
  Script script = Script::kRaw;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  ModelConfig model;  // max_decode_len filled in
  CharVocab vocab;
  std::vector<EpochRecord> history;
  std::vector<Checkpoint> recent;  // last keep_last epochs, oldest first
  Checkpoint best;                 // least validation loss
  bool early_stopped = false;
};

// Throws EmptyInput for an empty training set and DivergedError when a batch
// loss or an updated parameter stops being finite.
TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const OptimizerSpec& opt, DatasetSplit data, const CharVocab& vocab,
                  const EmbeddingTable* init_embeddings = nullptr);
// Builds the vocabulary from the training and validation pairs.
TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const OptimizerSpec& opt, DatasetSplit data);

// Mean word loss of `pairs` without dropout.
double validation_loss(TransductionModel& model, std::span<const CognatePair> pairs,
                       std::size_t batch_size);

// Element-wise mean of the last k parameter sets. Throws InvalidArgument when
// k is 0 or exceeds the history.
ParamSet average_checkpoints(std::span<const ParamSet> history, std::size_t k);
ParamSet average_checkpoints(std::span<const Checkpoint> history, std::size_t k);

std::unique_ptr<TransductionModel> restore_model(const Checkpoint& ckpt);

// Greedy predictions for every source; HAN outputs go through
// strip_trailing_repeats in the given script.
std::vector<GraphemeString> predict(const TransductionModel& model,
                                    std::span<const CognatePair> pairs,
                                    Script script = Script::kRaw);
EvalReport evaluate_model(const TransductionModel& model, std::span<const CognatePair> pairs,
                          Script script = Script::kRaw);
MetricSnapshot snapshot_metrics(const EvalReport& report);

}  // namespace cogtrans
