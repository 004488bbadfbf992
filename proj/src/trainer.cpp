// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogtrans/error_taxonomy.hpp"
#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

Batch pair_batch(const TransductionModel& model, std::span<const CognatePair> pairs) {
  std::vector<std::vector<std::size_t>> src, tgt;
  for (const CognatePair& p : pairs) {
    src.push_back(model.vocab().encode(p.source));
    tgt.push_back(model.vocab().encode(p.target));
  }
  return make_batch(src, tgt);
}

bool all_finite(const ParamSet& params) {
  for (const auto& [name, t] : params) {
    for (double x : t.data) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

Checkpoint make_checkpoint(const TransductionModel& model, const EpochRecord& rec) {
  Checkpoint c;
  c.model = model.config();
  c.vocab = model.vocab();
  c.params = model.params().snapshot();
  c.epoch = rec.epoch;
  c.train_loss = rec.train_loss;
  c.val_loss = rec.val_loss;
  c.metrics = rec.metrics;
  return c;
}

}  // namespace

double validation_loss(TransductionModel& model, std::span<const CognatePair> pairs,
                       std::size_t batch_size) {
  if (pairs.empty()) throw EmptyInput("validation_loss on no pairs");
  Rng unused(0);
  double total = 0.0;
  for (std::size_t start = 0; start < pairs.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, pairs.size() - start);
    Graph g(false);
    Var loss = model.loss(g, pair_batch(model, pairs.subspan(start, n)), false, unused);
    total += loss.value().data[0] * static_cast<double>(n);
  }
  return total / static_cast<double>(pairs.size());
}

TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const OptimizerSpec& opt_spec, DatasetSplit data, const CharVocab& vocab,
                  const EmbeddingTable* init_embeddings) {
  if (data.train.empty()) throw EmptyInput("training set is empty");
  if (train_cfg.batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (train_cfg.val_fraction < 0.0 || train_cfg.val_fraction >= 1.0) {
    throw InvalidArgument("val_fraction must be in [0, 1)");
  }
  if (data.validation.empty() && train_cfg.val_fraction > 0.0) {
    carve_validation(data, train_cfg.val_fraction, train_cfg.seed);
  }
  ModelConfig cfg = model_cfg;
  if (cfg.max_decode_len == 0) {
    std::size_t longest = 0;
    for (const auto* set : {&data.train, &data.validation}) {
      for (const CognatePair& p : *set) longest = std::max(longest, p.target.size());
    }
    cfg.max_decode_len = longest + kDecodeMargin;
  }
  auto model = make_model(cfg, vocab, train_cfg.seed);
  if (init_embeddings) model->load_embeddings(*init_embeddings);

  OptimizerSpec spec = opt_spec;
  spec.l2 = train_cfg.l2;
  Optimizer opt(spec);
  Rng rng(train_cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  TrainResult result;
  result.model = cfg;
  result.vocab = vocab;
  std::vector<CognatePair> order = data.train;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= train_cfg.max_epochs; ++epoch) {
    if (train_cfg.shuffle_each_epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      std::shuffle(data.validation.begin(), data.validation.end(), rng);
    }
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += train_cfg.batch_size) {
      const std::size_t n = std::min(train_cfg.batch_size, order.size() - start);
      Batch batch = pair_batch(*model, std::span<const CognatePair>(order).subspan(start, n));
      opt.prepare(model->params());
      Graph g;
      Var loss = model->loss(g, batch, true, rng);
      const double value = loss.value().data[0];
      if (!std::isfinite(value)) throw DivergedError(static_cast<int>(epoch), "loss is not finite");
      model->params().zero_grad();
      g.backward(loss);
      opt.step(model->params());
      total += value * static_cast<double>(n);
    }
    if (!all_finite(model->params())) {
      throw DivergedError(static_cast<int>(epoch), "parameters are not finite");
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = total / static_cast<double>(order.size());
    rec.val_loss = data.validation.empty()
                       ? rec.train_loss
                       : validation_loss(*model, data.validation, std::max<std::size_t>(
                                                                      train_cfg.batch_size, 64));
    if (!std::isfinite(rec.val_loss)) {
      throw DivergedError(static_cast<int>(epoch), "validation loss is not finite");
    }
    if (train_cfg.validation_metrics && !data.validation.empty()) {
      rec.metrics = snapshot_metrics(evaluate_model(*model, data.validation, train_cfg.script));
    }
    result.history.push_back(rec);
    if (train_cfg.on_epoch) train_cfg.on_epoch(rec);

    if (train_cfg.keep_last > 0) {
      if (result.recent.size() == train_cfg.keep_last) result.recent.erase(result.recent.begin());
      result.recent.push_back(make_checkpoint(*model, rec));
    }
    if (rec.val_loss < best_loss) {
      best_loss = rec.val_loss;
      since_best = 0;
      result.best = make_checkpoint(*model, rec);
    } else if (++since_best > train_cfg.patience) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const OptimizerSpec& opt, DatasetSplit data) {
  std::vector<CognatePair> seen = data.train;
  seen.insert(seen.end(), data.validation.begin(), data.validation.end());
  const CharVocab vocab = build_vocab(seen);
  return train(model_cfg, train_cfg, opt, std::move(data), vocab);
}

ParamSet average_checkpoints(std::span<const ParamSet> history, std::size_t k) {
  if (k == 0 || k > history.size()) {
    throw InvalidArgument("cannot average the last " + std::to_string(k) + " of " +
                          std::to_string(history.size()) + " checkpoints");
  }
  const auto window = history.subspan(history.size() - k);
  ParamSet out = window.back().snapshot();
  for (const ParamSet& p : window) {
    if (!p.same_layout(out)) throw InvalidArgument("checkpoints have different layouts");
  }
  for (auto& [name, t] : out) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      double s = 0.0;
      for (const ParamSet& p : window) s += p.at(name).data[i];
      t.data[i] = s / static_cast<double>(k);
    }
  }
  return out;
}

ParamSet average_checkpoints(std::span<const Checkpoint> history, std::size_t k) {
  std::vector<ParamSet> sets;
  sets.reserve(history.size());
  for (const Checkpoint& c : history) sets.push_back(c.params.snapshot());
  return average_checkpoints(sets, k);
}

std::unique_ptr<TransductionModel> restore_model(const Checkpoint& ckpt) {
  return make_model(ckpt.model, ckpt.vocab, ckpt.params);
}

std::vector<GraphemeString> predict(const TransductionModel& model,
                                    std::span<const CognatePair> pairs, Script script) {
  std::vector<GraphemeString> sources;
  sources.reserve(pairs.size());
  for (const CognatePair& p : pairs) sources.push_back(p.source);
  std::vector<GraphemeString> out;
  out.reserve(pairs.size());
  const bool han = model.config().architecture == Architecture::kHierarchical;
  for (Transduction& t : model.transduce(sources)) {
    out.push_back(han ? strip_trailing_repeats(t.word, script) : std::move(t.word));
  }
  return out;
}

EvalReport evaluate_model(const TransductionModel& model, std::span<const CognatePair> pairs,
                          Script script) {
  return evaluate(pairs, predict(model, pairs, script));
}

MetricSnapshot snapshot_metrics(const EvalReport& report) {
  return {report.bleu, report.ss, report.wa};
}

}  // namespace cogtrans
