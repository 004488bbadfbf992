// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "cogtrans/config.hpp"
#include "cogtrans/dataset.hpp"
#include "cogtrans/error_taxonomy.hpp"
#include "cogtrans/errors.hpp"
#include "cogtrans/gradcheck.hpp"
#include "cogtrans/metrics.hpp"
#include "cogtrans/oov.hpp"
#include "cogtrans/optimizer.hpp"
#include "cogtrans/synthetic.hpp"
#include "cogtrans/trainer.hpp"
#include "cogtrans/wx.hpp"

using namespace cogtrans;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

Tensor random_tensor(Shape shape, std::uint64_t seed, double limit = 1.0) {
  Rng rng(seed);
  return uniform_tensor(std::move(shape), limit, rng);
}

Var project(Graph& g, Var out, std::uint64_t seed = 99) {
  return sum(mul(out, g.constant(random_tensor(out.value().shape, seed))));
}

// Shared between criteria: the synthetic benchmark and its trained models.
struct Benchmark {
  DatasetSplit split;
  std::map<std::string, TrainResult> runs;
  std::map<std::string, EvalReport> test;
  double seconds = 0.0;
};

// ---------------------------------------------------------------------------

Outcome gradients() {
  const auto start = Clock::now();
  struct Case {
    std::string name;
    ParamSet params;
    LossBuilder loss;
  };
  std::vector<Case> cases;
  auto add_case = [&](std::string name, std::vector<std::pair<std::string, Tensor>> ps,
                      LossBuilder f) {
    Case c{std::move(name), {}, std::move(f)};
    for (auto& [n, t] : ps) c.params.add(n, std::move(t));
    cases.push_back(std::move(c));
  };
  add_case("matmul", {{"a", random_tensor({3, 4}, 1)}, {"b", random_tensor({4, 2}, 2)}},
           [](Graph& g, ParamSet& p) {
             return project(g, matmul(g.param(p.at("a")), g.param(p.at("b"))));
           });
  add_case("add/sub/broadcast",
           {{"a", random_tensor({3, 4}, 1)}, {"b", random_tensor({3, 4}, 2)},
            {"r", random_tensor({1, 4}, 3)}},
           [](Graph& g, ParamSet& p) {
             return project(g, add(sub(g.param(p.at("a")), g.param(p.at("b"))),
                                   g.param(p.at("r"))));
           });
  add_case("mul", {{"a", random_tensor({3, 4}, 1)}, {"r", random_tensor({1, 4}, 3)},
                   {"c", random_tensor({3, 1}, 4)}},
           [](Graph& g, ParamSet& p) {
             Var a = g.param(p.at("a"));
             return project(g, mul(mul(mul(a, a), g.param(p.at("r"))), g.param(p.at("c"))));
           });
  add_case("scale/sigmoid/tanh", {{"a", random_tensor({2, 5}, 1, 2.0)}},
           [](Graph& g, ParamSet& p) {
             Var a = g.param(p.at("a"));
             return project(g, add(sigmoid(add_scalar(scale(a, 1.5), 0.3)), tanh(a)));
           });
  Tensor away = random_tensor({2, 5}, 5);
  for (double& v : away.data) v += v > 0 ? 0.1 : -0.1;
  add_case("relu", {{"a", away}},
           [](Graph& g, ParamSet& p) { return project(g, relu(g.param(p.at("a")))); });
  add_case("sum/mean/dot", {{"a", random_tensor({1, 6}, 1)}, {"b", random_tensor({1, 6}, 2)}},
           [](Graph& g, ParamSet& p) {
             Var a = g.param(p.at("a")), b = g.param(p.at("b"));
             return add(mul(mean(a), sum(b)), dot(a, b));
           });
  add_case("softmax", {{"a", random_tensor({3, 4}, 1, 2.0)}}, [](Graph& g, ParamSet& p) {
    const std::array<std::size_t, 3> lengths{4, 2, 1};
    return project(g, softmax(g.param(p.at("a")), lengths));
  });
  add_case("concat/slice/gather/stack",
           {{"a", random_tensor({2, 3}, 1)}, {"b", random_tensor({2, 2}, 2)},
            {"c", random_tensor({2, 5}, 3)}},
           [](Graph& g, ParamSet& p) {
             Var a = g.param(p.at("a")), b = g.param(p.at("b")), c = g.param(p.at("c"));
             std::array<Var, 2> cols{a, b};
             std::array<Var, 2> rows{concat_cols(cols), c};
             const std::array<std::size_t, 5> idx{3, 0, 0, 2, 1};
             Var gathered = gather_rows(slice_cols(concat_rows(rows), 1, 4), idx);
             std::array<Var, 3> steps{slice_cols(a, 0, 2), b, slice_cols(c, 3, 5)};
             return add(project(g, gathered, 7), project(g, stack_time(steps), 8));
           });
  add_case("layer_norm",
           {{"x", random_tensor({3, 5}, 1, 2.0)}, {"g", random_tensor({1, 5}, 2)},
            {"b", random_tensor({1, 5}, 3)}},
           [](Graph& g, ParamSet& p) {
             return project(g, layer_norm(g.param(p.at("x")), g.param(p.at("g")),
                                          g.param(p.at("b"))));
           });
  add_case("dropout", {{"x", random_tensor({3, 5}, 1)}}, [](Graph& g, ParamSet& p) {
    Rng rng(42);
    return project(g, dropout(g.param(p.at("x")), 0.3, true, rng));
  });
  add_case("cross_entropy", {{"x", random_tensor({1, 5}, 1)}}, [](Graph& g, ParamSet& p) {
    return cross_entropy(softmax(g.param(p.at("x"))), 3);
  });
  add_case("softmax_cross_entropy", {{"x", random_tensor({4, 6}, 1, 2.0)}},
           [](Graph& g, ParamSet& p) {
             const std::array<std::size_t, 4> targets{0, 5, 2, 2};
             const std::array<double, 4> weights{0.25, 0.5, 0.0, 0.25};
             return softmax_cross_entropy(g.param(p.at("x")), targets, weights);
           });
  add_case("additive attention",
           {{"k", random_tensor({6, 3}, 1)}, {"q", random_tensor({2, 3}, 2)},
            {"v", random_tensor({1, 3}, 3)}, {"h", random_tensor({6, 4}, 4)}},
           [](Graph& g, ParamSet& p) {
             const std::array<std::size_t, 2> lengths{3, 2};
             Var s = additive_scores(g.param(p.at("k")), g.param(p.at("q")), g.param(p.at("v")), 3);
             return project(g, weighted_sum(softmax(s, lengths), g.param(p.at("h"))));
           });
  add_case("scaled dot attention",
           {{"q", random_tensor({6, 4}, 1)}, {"k", random_tensor({6, 4}, 2)},
            {"v", random_tensor({6, 4}, 3)}},
           [](Graph& g, ParamSet& p) {
             const std::array<std::size_t, 2> lengths{3, 2};
             return project(g, scaled_dot_attention(g.param(p.at("q")), g.param(p.at("k")),
                                                    g.param(p.at("v")), {2, 3, 3, 2, true},
                                                    lengths));
           });
  add_case("embedding", {{"t", random_tensor({5, 3}, 1)}}, [](Graph& g, ParamSet& p) {
    const std::array<std::size_t, 4> ids{4, 1, 1, 0};
    return project(g, gather_rows(g.param(p.at("t")), ids));
  });

  double worst = 0.0;
  std::string worst_name;
  auto record = [&](const std::string& name, const GradCheckResult& r) {
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_name = name;
    }
  };
  for (Case& c : cases) record(c.name, finite_diff_check(c.loss, c.params));

  const std::vector<CognatePair> words{
      {U"abca", U"abda"}, {U"dcb", U"dcba"}, {U"ab", U"b"}, {U"cad", U"cdd"}};
  const CharVocab vocab = build_vocab(words);
  for (Architecture a : {Architecture::kSeq2Seq, Architecture::kAlignment,
                         Architecture::kHierarchical, Architecture::kTransformer}) {
    for (CellKind cell : {CellKind::kLstm, CellKind::kGru}) {
      if (a == Architecture::kTransformer && cell == CellKind::kGru) continue;
      ModelConfig cfg;
      cfg.architecture = a;
      cfg.cell = cell;
      cfg.hidden_dim = 4;
      cfg.embed_dim = 3;
      cfg.attention_dim = 3;
      cfg.dropout = 0.0;
      cfg.chunk_size = 2;
      cfg.num_layers = 1;
      cfg.num_heads = 2;
      cfg.d_model = 8;
      cfg.ffn_dim = 6;
      auto m = make_model(cfg, vocab, 5);
      Rng point(11);
      for (auto& [name, t] : m->params()) t.data = uniform_tensor(t.shape, 1.0, point).data;
      std::vector<std::vector<std::size_t>> src, tgt;
      for (const CognatePair& p : words) {
        src.push_back(vocab.encode(p.source));
        tgt.push_back(vocab.encode(p.target));
      }
      const Batch batch = make_batch(src, tgt);
      const auto r = finite_diff_check(
          [&](Graph& g, ParamSet&) {
            Rng rng(1);
            return m->loss(g, batch, false, rng);
          },
          m->params());
      record(std::string(architecture_name(a)) + "/" + cell_kind_name(cell), r);
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-4 && secs < 60.0,
          std::to_string(cases.size()) + " ops + 7 model variants, max rel err " +
              std::to_string(worst) + " (" + worst_name + "), " + fmt(secs, 1) + " s"};
}

// ---------------------------------------------------------------------------

std::size_t recursive_edit(const std::u32string& a, const std::u32string& b, std::size_t i,
                           std::size_t j, std::vector<std::vector<long>>& memo) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  long& slot = memo[i][j];
  if (slot >= 0) return static_cast<std::size_t>(slot);
  const std::size_t best =
      std::min({recursive_edit(a, b, i + 1, j + 1, memo) + (a[i] == b[j] ? 0 : 1),
                recursive_edit(a, b, i + 1, j, memo) + 1, recursive_edit(a, b, i, j + 1, memo) + 1});
  slot = static_cast<long>(best);
  return best;
}

Outcome metric_oracles() {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> len(0, 8), pick(0, 5);
  auto word = [&](bool nonempty) {
    std::u32string w;
    int n = len(gen);
    if (nonempty && n == 0) n = 1;
    for (int k = 0; k < n; ++k) w.push_back(U"abcdef"[pick(gen)]);
    return w;
  };
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = word(false), b = word(false);
    std::vector<std::vector<long>> memo(a.size() + 1, std::vector<long>(b.size() + 1, -1));
    const double d = static_cast<double>(recursive_edit(a, b, 0, 0, memo));
    const double expect =
        a.empty() && b.empty() ? 100.0 : 100.0 * (1.0 - d / static_cast<double>(a.size() + b.size()));
    mismatches += string_similarity(a, b) != expect;
  }
  const double ss = string_similarity(U"abcd", U"abed");
  std::size_t bleu_misses = 0;
  for (int i = 0; i < 100; ++i) {
    const auto w = word(true);
    bleu_misses += std::abs(char_bleu(w, w) - 100.0) > 1e-9;
  }
  const std::vector<Sentence> pred{{"the", "cat", "sat", "on", "the", "mat"}, {"a", "dog", "runs"}};
  const std::vector<Sentence> ref{{"the", "cat", "sat", "on", "a", "mat"},
                                  {"a", "dog", "runs", "fast"}};
  const double hand = 100.0 * std::exp(1.0 - 10.0 / 9.0) *
                      std::pow(8.0 / 9.0 * 5.0 / 7.0 * 3.0 / 5.0 * 1.0 / 3.0, 0.25);
  const double cb = corpus_bleu(pred, ref);
  const bool pass = mismatches == 0 && ss == 87.5 && bleu_misses == 0 && std::abs(cb - hand) < 1e-9;
  return {pass, "SS mismatches " + std::to_string(mismatches) + "/1000, SS(abcd,abed) " +
                    fmt(ss) + ", char_bleu(x,x) misses " + std::to_string(bleu_misses) +
                    "/100, corpus BLEU " + fmt(cb, 6) + " vs " + fmt(hand, 6)};
}

// ---------------------------------------------------------------------------

Outcome split_counts() {
  std::vector<CognatePair> pairs;
  for (int i = 0; i < 4220; ++i) {
    pairs.push_back({graphemes("w" + std::to_string(i)), graphemes("v" + std::to_string(i))});
  }
  const DatasetSplit s = split_dataset(pairs, 1);
  const std::string d = std::to_string(s.train.size()) + "/" + std::to_string(s.validation.size()) +
                        "/" + std::to_string(s.test.size());
  return {s.train.size() == 2849 && s.validation.size() == 316 && s.test.size() == 1055, d};
}

// ---------------------------------------------------------------------------

RunConfig benchmark_config(Architecture a) {
  RunConfig c;
  c.model.architecture = a;
  c.model.embed_dim = 32;
  c.model.hidden_dim = 64;
  c.model.dropout = 0.1;
  c.train.batch_size = 16;
  c.train.max_epochs = 200;
  c.train.patience = 5;
  c.train.seed = 1;
  c.optimizer.lr = 3e-3;
  if (a == Architecture::kTransformer) {
    c.model.d_model = 64;
    c.model.num_heads = 4;
    c.model.num_layers = 2;
    c.model.ffn_dim = 128;
    c.optimizer.lr = 1e-3;
  }
  return c;
}

Outcome synthetic_end_to_end(Benchmark& bench) {
  const auto start = Clock::now();
  const auto pairs = generate_pairs(7, 3000, default_ruleset());
  bench.split = split_dataset(pairs, 7);
  for (Architecture a : {Architecture::kAlignment, Architecture::kTransformer,
                         Architecture::kSeq2Seq, Architecture::kHierarchical}) {
    const RunConfig c = benchmark_config(a);
    const auto t0 = Clock::now();
    TrainResult r = train(c.model, c.train, c.optimizer, bench.split);
    auto model = restore_model(r.best);
    const std::string name = architecture_name(a);
    bench.test[name] = evaluate_model(*model, bench.split.test);
    std::cout << "  " << name << ": " << r.history.size() << " epochs (best " << r.best.epoch
              << "), test BLEU " << fmt(bench.test[name].bleu) << " WA "
              << fmt(bench.test[name].wa) << ", " << fmt(seconds_since(t0), 0) << " s\n"
              << std::flush;
    bench.runs[name] = std::move(r);
  }
  bench.seconds = seconds_since(start);
  const EvalReport& am = bench.test["am"];
  const EvalReport& tn = bench.test["tn"];
  const double s2s = bench.test["seq2seq"].bleu;
  const bool lowest = s2s < am.bleu && s2s < tn.bleu && s2s < bench.test["han"].bleu;
  bool within_epochs = true;
  for (const auto& [name, r] : bench.runs) within_epochs &= r.history.size() <= 200;
  const bool pass = am.wa >= 90.0 && am.bleu >= 95.0 && tn.wa >= 90.0 && tn.bleu >= 95.0 &&
                    lowest && within_epochs && bench.seconds <= 1800.0;
  std::ostringstream d;
  d << "AM " << fmt(am.bleu) << "/" << fmt(am.wa) << "%, TN " << fmt(tn.bleu) << "/"
    << fmt(tn.wa) << "%, HAN " << fmt(bench.test["han"].bleu) << ", seq2seq " << fmt(s2s)
    << (lowest ? " (lowest)" : " (not lowest)") << ", " << fmt(bench.seconds / 60.0, 1) << " min";
  return {pass, d.str()};
}

// ---------------------------------------------------------------------------

Outcome embedding_initialisation(const Benchmark& bench) {
  RunConfig c = benchmark_config(Architecture::kAlignment);
  c.model.hidden_dim = 32;
  c.train.max_epochs = 30;
  c.train.patience = 30;
  DatasetSplit split = bench.split;
  split.test.clear();
  const CharVocab vocab = build_vocab([&] {
    std::vector<CognatePair> all = split.train;
    all.insert(all.end(), split.validation.begin(), split.validation.end());
    return all;
  }());
  std::vector<GraphemeString> words;
  for (const auto* part : {&split.train, &split.validation}) {
    for (const CognatePair& p : *part) {
      words.push_back(p.source);
      words.push_back(p.target);
    }
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  const WordVectorStore store = subword_vectors(words, c.model.embed_dim, 3);
  const EmbeddingTable ft = ft_avg_embed(store, vocab).table;
  EmbeddingTable zero;
  zero.table = Tensor({vocab.size(), c.model.embed_dim});

  const TrainResult with_ft = train(c.model, c.train, c.optimizer, split, vocab, &ft);
  const TrainResult with_zero = train(c.model, c.train, c.optimizer, split, vocab, &zero);
  const double bleu_ft = with_ft.best.metrics.bleu, bleu_zero = with_zero.best.metrics.bleu;
  const std::size_t ep_ft = with_ft.best.epoch, ep_zero = with_zero.best.epoch;
  // Pre-trained rows converge at a later epoch in the reference results.
  const bool pass = bleu_ft >= bleu_zero && ep_ft >= ep_zero;
  return {pass, "validation BLEU ft-avg " + fmt(bleu_ft) + " (ep " + std::to_string(ep_ft) +
                    ") vs zero " + fmt(bleu_zero) + " (ep " + std::to_string(ep_zero) + ")"};
}

// ---------------------------------------------------------------------------

Outcome checkpoint_average(const Benchmark& bench) {
  const TrainResult& r = bench.runs.at("am");
  if (r.recent.size() < 6) return {false, "fewer than 6 snapshots kept"};
  const ParamSet avg = average_checkpoints(r.recent, 6);
  const std::size_t first = r.recent.size() - 6;
  double worst = 0.0;
  std::size_t scalars = 0;
  for (const auto& [name, t] : avg) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      double s = 0.0;
      for (std::size_t k = first; k < r.recent.size(); ++k) s += r.recent[k].params.at(name).data[i];
      worst = std::max(worst, std::abs(t.data[i] - s / 6.0));
      ++scalars;
    }
  }
  return {worst <= 1e-12, std::to_string(scalars) + " scalars of the AM run, max deviation " +
                              std::to_string(worst)};
}

// ---------------------------------------------------------------------------

double one_step(OptimizerKind kind, double lr, double theta, double g) {
  OptimizerSpec s;
  s.kind = kind;
  s.lr = lr;
  ParamSet p;
  p.add("w", Tensor::scalar(theta));
  Optimizer opt(s);
  opt.prepare(p);
  p.at("w").grad = {g};
  opt.step(p);
  return p.at("w").data[0];
}

Outcome optimizer_steps() {
  struct Row {
    const char* name;
    OptimizerKind kind;
    double lr;
    double expected;
    double tol;
  };
  const double g = 0.5, theta = 1.0;
  const std::vector<Row> rows{
      {"adam", OptimizerKind::kAdam, 1e-3, -1e-3, 1e-9},
      {"sgd", OptimizerKind::kSgd, 0.1, theta - 0.1 * g, 1e-15},
      {"momentum", OptimizerKind::kMomentum, 0.1, theta - 0.1 * g, 1e-15},
      {"nesterov", OptimizerKind::kNesterov, 0.1, theta - 0.1 * g, 1e-15},
      {"rmsprop", OptimizerKind::kRmsprop, 0.01,
       theta - 0.01 * g / (std::sqrt(0.1 * g * g) + 1e-8), 1e-14},
      {"adagrad", OptimizerKind::kAdagrad, 0.01, theta - 0.01 * g / (std::abs(g) + 1e-8), 1e-14},
      {"adadelta", OptimizerKind::kAdadelta, 1.0,
       theta - std::sqrt(1e-6) / std::sqrt(0.05 * g * g + 1e-6) * g, 1e-14},
  };
  bool pass = true;
  std::string d;
  for (const Row& r : rows) {
    double got, want;
    if (r.kind == OptimizerKind::kAdam) {
      got = one_step(r.kind, r.lr, 0.0, 1.0);
      want = r.expected;
    } else {
      got = one_step(r.kind, r.lr, theta, g);
      want = r.expected;
    }
    const bool ok = std::abs(got - want) <= r.tol;
    pass &= ok;
    if (!ok) d += std::string(r.name) + " off by " + std::to_string(got - want) + "; ";
  }
  return {pass, d.empty() ? "7 optimizers match their closed forms" : d};
}

// ---------------------------------------------------------------------------

Outcome post_processing() {
  const GraphemeString once = strip_trailing_repeats(U"Jatatatata", Script::kWx);
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> len(0, 12), pick(0, 3);
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    std::u32string w;
    for (int k = len(gen); k > 0; --k) w.push_back(U"abcd"[pick(gen)]);
    const GraphemeString s = strip_trailing_repeats(w);
    failures += strip_trailing_repeats(s) != s;
  }
  return {once == U"Jata" && failures == 0,
          "Jatatatata -> " + to_utf8(once) + ", idempotence failures " + std::to_string(failures) +
              "/1000"};
}

// ---------------------------------------------------------------------------

Outcome oov_pipeline(const Benchmark& bench) {
  SyntheticMtConfig cfg;
  cfg.sentences = 500;
  cfg.oov_rate = 0.2;
  const SyntheticMtCorpus mt = generate_mt_corpus(cfg, default_ruleset());
  auto model = restore_model(bench.runs.at("am").best);
  const WordTransducer transducer = model_transducer(*model, Script::kRaw);
  const std::vector<std::size_t> ks{cfg.frequent_words};
  const std::vector<PipelineRow> rows = evaluate_pipeline(mt.records, mt.monolingual, ks, transducer);

  const FrequencyShortlist shortlist = build_shortlist(mt.monolingual, cfg.frequent_words);
  const std::vector<Correction> fixed = correct_corpus(mt.records, shortlist, transducer);
  std::size_t stray = 0;
  for (std::size_t s = 0; s < mt.records.size(); ++s) {
    const PipelineRecord& r = mt.records[s];
    const auto aligned = align_from_attention(r.attention);
    std::set<std::size_t> touched;
    for (std::size_t j : detect_oov(r.source, shortlist)) {
      touched.insert(aligned[j].begin(), aligned[j].end());
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < r.baseline.size(); ++i) {
      if (touched.count(i)) continue;
      while (k < fixed[s].tokens.size() && fixed[s].tokens[k] != r.baseline[i]) ++k;
      if (k == fixed[s].tokens.size()) {
        ++stray;
        break;
      }
      ++k;
    }
  }
  const PipelineRow& row = rows.front();
  const double oov_share = static_cast<double>(mt.oov_tokens) / static_cast<double>(mt.total_tokens);
  return {row.delta >= 3.0 && stray == 0,
          "K=" + std::to_string(row.k) + ", OOV share " + fmt(100.0 * oov_share, 1) +
              "%, BLEU " + fmt(row.baseline_bleu) + " -> " + fmt(row.corrected_bleu) + " (+" +
              fmt(row.delta) + "), " + std::to_string(row.replaced) +
              " replacements, non-OOV changes " + std::to_string(stray)};
}

// ---------------------------------------------------------------------------

Outcome codec() {
  std::ifstream in(std::string(COGTRANS_TEST_DATA) + "/hindi_words.txt");
  std::size_t words = 0, failures = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const GraphemeString w = graphemes(line);
    ++words;
    try {
      failures += wx_decode(wx_encode(w)) != w;
    } catch (const Error&) {
      ++failures;
    }
  }
  const std::u32string m = wx_encode(U"कं").substr(2);
  return {words > 0 && failures == 0 && m == U"M",
          std::to_string(words) + " words, round-trip failures " + std::to_string(failures) +
              ", anusvara -> " + to_utf8(m)};
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(COGTRANS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "cogtrans_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = (dir / "pairs.tsv").string();
  if (run_cli("synth-gen --seed 5 --n 400 --out " + data) != 0) return {false, "synth-gen failed"};
  const std::string common = "train --quiet --data " + data +
                             " --set model.hidden_dim=16 --set model.embed_dim=16"
                             " --set train.max_epochs=3 --set run.average_last=2 --out ";
  for (const char* run : {"a", "b"}) {
    if (run_cli(common + (dir / run).string()) != 0) return {false, "train run failed"};
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const fs::path other = dir / "b" / entry.path().filename();
    ++files;
    differing += !fs::exists(other) || slurp(entry.path()) != slurp(other);
  }
  fs::remove_all(dir);
  return {files >= 5 && differing == 0,
          std::to_string(files) + " output files compared, " + std::to_string(differing) +
              " differ"};
}

}  // namespace

int main() {
  std::cout << std::unitbuf;
  Benchmark bench;
  bool have_bench = false;
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "Criterion " << id << " (" << title << "): " << (o.pass ? "PASS" : "FAIL")
              << " - " << o.detail << "\n";
  };
  report(1, "gradient correctness", gradients);
  report(2, "metric oracles", metric_oracles);
  report(3, "split reproduction", split_counts);
  report(4, "synthetic end-to-end", [&] {
    Outcome o = synthetic_end_to_end(bench);
    have_bench = true;
    return o;
  });
  auto needs_bench = [&](const std::function<Outcome(const Benchmark&)>& f) {
    return [&, f]() -> Outcome {
      if (!have_bench || bench.runs.count("am") == 0) return {false, "synthetic benchmark did not run"};
      return f(bench);
    };
  };
  report(5, "embedding initialisation", needs_bench(embedding_initialisation));
  report(6, "checkpoint averaging", needs_bench(checkpoint_average));
  report(7, "optimizer unit steps", optimizer_steps);
  report(8, "post-processing", post_processing);
  report(9, "OOV pipeline", needs_bench(oov_pipeline));
  report(10, "WX codec", codec);
  report(11, "determinism", determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
