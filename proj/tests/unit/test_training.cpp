// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "cogtrans/config.hpp"
#include "cogtrans/dataset.hpp"
#include "cogtrans/errors.hpp"
#include "cogtrans/grid_search.hpp"
#include "cogtrans/optimizer.hpp"
#include "cogtrans/synthetic.hpp"
#include "cogtrans/trainer.hpp"

using namespace cogtrans;
using Catch::Approx;

namespace {

// One scalar parameter theta = 1 with gradient 0.5.
double first_step(OptimizerSpec spec, double theta = 1.0, double g = 0.5) {
  ParamSet p;
  p.add("w", Tensor::scalar(theta));
  Optimizer opt(spec);
  opt.prepare(p);
  p.at("w").grad = {g};
  opt.step(p);
  return p.at("w").data[0];
}

OptimizerSpec spec_of(OptimizerKind k, double lr) {
  OptimizerSpec s;
  s.kind = k;
  s.lr = lr;
  return s;
}

std::vector<CognatePair> small_pairs(std::size_t n, std::uint64_t seed) {
  return generate_pairs(seed, n, default_ruleset());
}

ModelConfig small_am() {
  ModelConfig m;
  m.hidden_dim = 8;
  m.embed_dim = 8;
  m.dropout = 0.0;
  return m;
}

}  // namespace

TEST_CASE("optimizer first steps match closed forms", "[optimizer]") {
  CHECK(first_step(spec_of(OptimizerKind::kSgd, 0.1)) == Approx(0.95).epsilon(1e-15));

  OptimizerSpec adam = spec_of(OptimizerKind::kAdam, 1e-3);
  const double moved = first_step(adam, 1.0, 1.0) - 1.0;
  CHECK(std::abs(moved - (-1e-3)) < 1e-9);

  const double momentum = first_step(spec_of(OptimizerKind::kMomentum, 0.1));
  CHECK(momentum == Approx(1.0 - 0.1 * 0.5).epsilon(1e-15));
  CHECK(first_step(spec_of(OptimizerKind::kNesterov, 0.1)) == momentum);

  // mean square 0.1 g^2, update lr g / (sqrt(0.1) |g| + eps)
  const double rms = first_step(spec_of(OptimizerKind::kRmsprop, 0.01));
  CHECK(rms == Approx(1.0 - 0.01 * 0.5 / (std::sqrt(0.1 * 0.25) + 1e-8)).epsilon(1e-14));

  const double ada = first_step(spec_of(OptimizerKind::kAdagrad, 0.01));
  CHECK(ada == Approx(1.0 - 0.01 * 0.5 / (0.5 + 1e-8)).epsilon(1e-14));

  // E[g^2] = 0.05 g^2; delta = -sqrt(0 + eps) / sqrt(E[g^2] + eps) * g
  const double eg = 0.05 * 0.25;
  const double delta = -std::sqrt(1e-6) / std::sqrt(eg + 1e-6) * 0.5;
  CHECK(first_step(spec_of(OptimizerKind::kAdadelta, 1.0)) == Approx(1.0 + delta).epsilon(1e-14));
}

TEST_CASE("optimizer extras", "[optimizer]") {
  SECTION("l2 adds l2 * theta to the gradient") {
    OptimizerSpec s = spec_of(OptimizerKind::kSgd, 0.1);
    s.l2 = 0.2;
    CHECK(first_step(s, 2.0, 0.5) == Approx(2.0 - 0.1 * (0.5 + 0.4)));
  }
  SECTION("inverse-time decay") {
    OptimizerSpec s = spec_of(OptimizerKind::kSgd, 0.1);
    s.decay = 0.5;
    ParamSet p;
    p.add("w", Tensor::scalar(0.0));
    Optimizer opt(s);
    CHECK(opt.current_lr() == 0.1);
    p.at("w").grad = {1.0};
    opt.step(p);
    CHECK(opt.current_lr() == Approx(0.1 / 1.5));
  }
  SECTION("missing gradients") {
    ParamSet p;
    p.add("w", Tensor::scalar(1.0));
    p.add("frozen", Tensor::scalar(1.0), false);
    Optimizer opt(spec_of(OptimizerKind::kAdam, 1e-3));
    CHECK_THROWS_AS(opt.step(p), MissingGrad);
    p.at("w").grad = {1.0};
    CHECK_NOTHROW(opt.step(p));
    CHECK(p.at("frozen").data[0] == 1.0);
  }
  SECTION("state buffers mirror parameter shapes") {
    for (OptimizerKind k : {OptimizerKind::kAdam, OptimizerKind::kMomentum,
                            OptimizerKind::kNesterov, OptimizerKind::kRmsprop,
                            OptimizerKind::kAdagrad, OptimizerKind::kAdadelta}) {
      ParamSet p;
      p.add("a", Tensor({2, 3}, 0.5));
      p.add("b", Tensor({1, 4}, -0.5));
      Optimizer opt(spec_of(k, 0.01));
      for (int step = 0; step < 3; ++step) {
        opt.prepare(p);
        for (auto& [n, t] : p) t.grad.assign(t.size(), 0.1 * (step + 1));
        opt.step(p);
      }
      for (const auto& [param, buffers] : opt.state()) {
        for (const auto& [name, buf] : buffers) CHECK(buf.size() == p.at(param).size());
      }
      CHECK(opt.steps() == 3);
      CHECK(parse_optimizer(optimizer_name(k)) == k);
    }
  }
}

TEST_CASE("checkpoint averaging", "[average]") {
  auto one = [](double v) {
    ParamSet p;
    p.add("w", Tensor::vector({v, 2 * v}));
    return p;
  };
  std::vector<ParamSet> two{one(0.0), one(2.0)};
  CHECK(average_checkpoints(two, 2).at("w").data == std::vector<double>{1.0, 2.0});
  CHECK(average_checkpoints(two, 1).at("w").data == two[1].at("w").data);
  CHECK_THROWS_AS(average_checkpoints(two, 3), InvalidArgument);
  CHECK_THROWS_AS(average_checkpoints(two, 0), InvalidArgument);

  Rng rng(8);
  std::vector<ParamSet> ten;
  for (int i = 0; i < 10; ++i) {
    ParamSet p;
    p.add("a", uniform_tensor({3, 4}, 1.0, rng));
    p.add("b", uniform_tensor({1, 5}, 1.0, rng));
    ten.push_back(std::move(p));
  }
  const ParamSet avg = average_checkpoints(ten, 6);
  for (const char* name : {"a", "b"}) {
    const std::size_t n = ten[0].at(name).size();
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int c = 4; c < 10; ++c) s += ten[c].at(name).data[i];
      CHECK(std::abs(avg.at(name).data[i] - s / 6.0) < 1e-12);
    }
  }
  std::vector<ParamSet> shuffled(ten.begin() + 4, ten.end());
  std::reverse(shuffled.begin(), shuffled.end());
  const ParamSet avg2 = average_checkpoints(shuffled, 6);
  for (std::size_t i = 0; i < avg.at("a").size(); ++i) {
    CHECK(std::abs(avg.at("a").data[i] - avg2.at("a").data[i]) < 1e-12);
  }
  std::vector<ParamSet> same(4, ten[0].snapshot());
  CHECK(average_checkpoints(same, 4).at("b").data == ten[0].at("b").data);
}

TEST_CASE("training loop rules", "[train]") {
  DatasetSplit split;
  split.train = small_pairs(24, 3);
  split.validation = small_pairs(6, 4);
  TrainConfig tc;
  tc.batch_size = 8;
  tc.max_epochs = 6;
  tc.validation_metrics = false;

  SECTION("patience 0 stops at the first non-improving epoch") {
    // Reshuffled validation batches change the loss in the last bit.
    tc.shuffle_each_epoch = false;
    tc.patience = 0;
    OptimizerSpec frozen = spec_of(OptimizerKind::kSgd, 0.0);
    const TrainResult r = train(small_am(), tc, frozen, split);
    CHECK(r.history.size() == 2);
    CHECK(r.early_stopped);
    CHECK(r.best.epoch == 1);
    tc.patience = 2;
    CHECK(train(small_am(), tc, frozen, split).history.size() == 4);
  }
  SECTION("identical seeds give identical curves") {
    const TrainResult a = train(small_am(), tc, OptimizerSpec{}, split);
    const TrainResult b = train(small_am(), tc, OptimizerSpec{}, split);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
      CHECK(a.history[i].train_loss == b.history[i].train_loss);
      CHECK(a.history[i].val_loss == b.history[i].val_loss);
    }
    tc.seed = 2;
    const TrainResult c = train(small_am(), tc, OptimizerSpec{}, split);
    CHECK(c.history[0].train_loss != a.history[0].train_loss);
  }
  SECTION("best checkpoint has the least validation loss and recent keeps the tail") {
    tc.keep_last = 3;
    const TrainResult r = train(small_am(), tc, OptimizerSpec{}, split);
    double least = r.history[0].val_loss;
    for (const EpochRecord& e : r.history) least = std::min(least, e.val_loss);
    CHECK(r.best.val_loss == least);
    CHECK(r.recent.size() == 3);
    CHECK(r.recent.back().epoch == r.history.size());
    CHECK(r.model.max_decode_len > 0);
  }
  SECTION("errors") {
    DatasetSplit empty;
    CHECK_THROWS_AS(train(small_am(), tc, OptimizerSpec{}, empty), EmptyInput);
    OptimizerSpec wild = spec_of(OptimizerKind::kSgd, 1e200);
    try {
      train(small_am(), tc, wild, split);
      FAIL("expected divergence");
    } catch (const DivergedError& e) {
      CHECK(e.epoch() == 1);
    }
    tc.batch_size = 0;
    CHECK_THROWS_AS(train(small_am(), tc, OptimizerSpec{}, split), InvalidArgument);
  }
  SECTION("Adam with heavy decay does not crash") {
    OptimizerSpec s;
    s.decay = 0.9;
    CHECK_NOTHROW(train(small_am(), tc, s, split));
  }
}

TEST_CASE("copy task reaches high validation accuracy", "[train][slow]") {
  std::vector<CognatePair> words;
  for (const CognatePair& p : generate_pairs(21, 500, default_ruleset())) {
    words.push_back({p.source, p.source});
  }
  DatasetSplit split;
  split.train.assign(words.begin(), words.begin() + 450);
  split.validation.assign(words.begin() + 450, words.end());
  ModelConfig m;
  m.hidden_dim = 32;
  m.embed_dim = 16;
  m.dropout = 0.0;
  TrainConfig tc;
  tc.batch_size = 16;
  tc.max_epochs = 50;
  tc.patience = 4;
  tc.validation_metrics = false;
  OptimizerSpec opt;
  opt.lr = 5e-3;
  const TrainResult r = train(m, tc, opt, split);
  auto model = restore_model(r.best);
  const EvalReport rep = evaluate_model(*model, split.validation);
  INFO("best epoch " << r.best.epoch << " wa " << rep.wa);
  CHECK(rep.wa >= 95.0);
  CHECK(r.history.size() <= 50);
}

TEST_CASE("grid search", "[grid]") {
  const auto pool = small_pairs(30, 6);
  RunConfig fixed;
  fixed.model = small_am();
  fixed.train.max_epochs = 2;
  fixed.train.validation_metrics = true;
  fixed.train.seed = 5;

  SECTION("a single point equals a direct training run") {
    const GridSpace space{{"model.hidden_dim", {"8"}}};
    const auto cells = grid_search(space, fixed, pool);
    REQUIRE(cells.size() == 1);
    DatasetSplit split;
    split.train = pool;
    const std::uint64_t seed = fixed.train.seed * 1000003ULL;
    carve_validation(split, 0.1, seed);
    TrainConfig tc = fixed.train;
    tc.seed = seed;
    const TrainResult direct = train(fixed.model, tc, fixed.optimizer, split);
    CHECK(cells[0].val_loss == direct.best.val_loss);
    CHECK(cells[0].best_epoch == direct.best.epoch);
    CHECK(cells[0].metrics == direct.best.metrics);
  }
  SECTION("axes mirror the batch-size and dropout tables") {
    fixed.train.max_epochs = 1;
    const GridSpace batches{parse_grid_axis("train.batch_size=1,4,8,16,20")};
    CHECK(grid_search(batches, fixed, pool).size() == 5);
    const GridSpace drops{parse_grid_axis("model.dropout=0,0.1,0.2,0.3,0.4,0.5,0.6,0.7")};
    const auto cells = grid_search(drops, fixed, pool, 2);
    CHECK(cells.size() == 8);
    const std::string table = format_grid_table(cells);
    CHECK(table.find("ep") != std::string::npos);
    CHECK(std::count(table.begin(), table.end(), '\n') == 9);
  }
  SECTION("invalid combinations are skipped with a reason") {
    fixed.train.max_epochs = 1;
    const GridSpace space{{"model.architecture", {"tn", "am"}}, {"model.cell", {"gru"}}};
    const auto cells = grid_search(space, fixed, pool);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].skipped);
    CHECK_FALSE(cells[0].reason.empty());
    CHECK_FALSE(cells[1].skipped);
    CHECK(format_grid_table(cells).find("skipped") != std::string::npos);
  }
  SECTION("divergence is reported as a broken model") {
    const GridSpace space{{"optimizer.kind", {"sgd"}}, {"optimizer.lr", {"1e200"}}};
    const auto cells = grid_search(space, fixed, pool);
    CHECK(cells[0].diverged);
    CHECK(format_grid_table(cells).find("Model broken") != std::string::npos);
  }
  CHECK_THROWS_AS(grid_search({}, fixed, pool), InvalidArgument);
  CHECK_THROWS_AS(parse_grid_axis("model.hidden_dim"), InvalidArgument);
}
