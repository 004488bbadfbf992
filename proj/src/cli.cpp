// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "cogtrans/checkpoint.hpp"
#include "cogtrans/config.hpp"
#include "cogtrans/dataset.hpp"
#include "cogtrans/embeddings.hpp"
#include "cogtrans/error_taxonomy.hpp"
#include "cogtrans/errors.hpp"
#include "cogtrans/grid_search.hpp"
#include "cogtrans/metrics.hpp"
#include "cogtrans/oov.hpp"
#include "cogtrans/plot.hpp"
#include "cogtrans/report.hpp"
#include "cogtrans/synthetic.hpp"
#include "cogtrans/wx.hpp"

namespace fs = std::filesystem;

namespace cogtrans {
namespace {

GraphemeString to_script(const GraphemeString& word, Script script) {
  if (script == Script::kWx && detect_script(word) == Script::kDevanagari) return wx_encode(word);
  return word;
}

std::vector<CognatePair> to_script(std::vector<CognatePair> pairs, Script script) {
  for (CognatePair& p : pairs) {
    p.source = to_script(p.source, script);
    p.target = to_script(p.target, script);
  }
  return pairs;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InvalidArgument("cannot write " + path.string());
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(std::stoul(item));
  }
  if (out.empty()) throw InvalidArgument("expected a comma-separated list of sizes");
  return out;
}

void apply_sets(RunConfig& cfg, const std::vector<std::string>& sets) {
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got " + kv);
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

RunConfig base_config(const std::string& config_path, const std::vector<std::string>& sets) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = load_run_config(config_path);
  apply_sets(cfg, sets);
  return cfg;
}

void print_attention(std::ostream& out, const AttentionMatrix& att) {
  out << std::fixed << std::setprecision(4);
  for (std::size_t r = 0; r < att.rows(); ++r) {
    for (std::size_t c = 0; c < att.cols(); ++c) out << (c ? "\t" : "") << att(r, c);
    out << '\n';
  }
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data, config, out, report_dir, embeddings;
  std::vector<std::string> sets;
  std::size_t average = 0;
  bool plot = false, quiet = false;
};

int cmd_train(const TrainArgs& a) {
  RunConfig cfg = base_config(a.config, a.sets);
  if (!a.data.empty()) cfg.data = a.data;
  if (!a.embeddings.empty()) cfg.embeddings = a.embeddings;
  if (a.average > 0) cfg.average_last = a.average;
  if (cfg.data.empty()) throw InvalidArgument("train needs --data or paths.data");
  const fs::path out_dir = !a.out.empty()               ? fs::path(a.out)
                           : !cfg.checkpoints.empty()   ? cfg.checkpoints
                                                        : default_checkpoint_dir();
  const fs::path report_dir = !a.report_dir.empty() ? fs::path(a.report_dir)
                              : !cfg.reports.empty() ? cfg.reports
                                                     : out_dir;
  cfg.train.script = cfg.script;

  const auto pairs = to_script(load_cognate_tsv(cfg.data), cfg.script);
  DatasetSplit split = split_dataset(pairs, cfg.split_seed);
  fs::create_directories(out_dir);
  save_cognate_tsv(out_dir / "train.tsv", split.train);
  save_cognate_tsv(out_dir / "validation.tsv", split.validation);
  save_cognate_tsv(out_dir / "test.tsv", split.test);
  const std::vector<CognatePair> test = split.test;

  std::vector<CognatePair> train_side = split.train;
  train_side.insert(train_side.end(), split.validation.begin(), split.validation.end());
  const CharVocab vocab = build_vocab(train_side);
  EmbeddingTable init;
  const EmbeddingTable* init_ptr = nullptr;
  if (!cfg.embeddings.empty()) {
    CharVocab emb_vocab;
    EmbeddingTable table = load_embeddings(cfg.embeddings, &emb_vocab);
    init = remap_embeddings(table, emb_vocab, vocab);
    init_ptr = &init;
  }
  if (!a.quiet) {
    cfg.train.on_epoch = [](const EpochRecord& r) {
      std::cerr << "epoch " << r.epoch << "  train " << std::fixed << std::setprecision(4)
                << r.train_loss << "  val " << r.val_loss << "  bleu " << std::setprecision(2)
                << r.metrics.bleu << "  wa " << r.metrics.wa << '\n';
    };
  }
  TrainResult result = train(cfg.model, cfg.train, cfg.optimizer, split, vocab, init_ptr);

  Checkpoint final_ckpt = result.best;
  if (cfg.average_last > 0) {
    const std::size_t k = std::min(cfg.average_last, result.recent.size());
    final_ckpt = result.recent.back();
    final_ckpt.params = average_checkpoints(std::span<const Checkpoint>(result.recent), k);
  }
  save_checkpoint(result.best, out_dir / "best.ckpt");
  save_checkpoint(final_ckpt, out_dir / "model.ckpt");

  auto model = restore_model(final_ckpt);
  EvalReport report = evaluate_model(*model, test, cfg.script);
  if (cfg.script != Script::kRaw) annotate_errors(report, cfg.script);
  fs::create_directories(report_dir);
  save_report_tsv(report_dir / "report.tsv", report);
  {
    std::ostringstream hist;
    write_history_tsv(hist, result.history);
    write_file(report_dir / "history.tsv", hist.str());
  }
  const std::vector<std::pair<std::string, EvalReport>> rows{
      {architecture_name(cfg.model.architecture), report}};
  const std::string summary = format_summary(rows);
  write_file(report_dir / "summary.txt", summary);
  if (a.plot) {
    std::vector<Series> curves{{"train loss", {}}, {"validation loss", {}}};
    for (const EpochRecord& r : result.history) {
      curves[0].points.emplace_back(static_cast<double>(r.epoch), r.train_loss);
      curves[1].points.emplace_back(static_cast<double>(r.epoch), r.val_loss);
    }
    write_file(report_dir / "curves.svg", svg_line_chart("Training curves", "epoch", "loss", curves));
    const std::vector<std::pair<std::string, double>> bars{
        {"BLEU", report.bleu}, {"SS", report.ss}, {"WA", report.wa}};
    write_file(report_dir / "metrics.svg", svg_bar_chart("Test metrics", "score", bars));
  }
  std::cout << summary << "best epoch " << result.best.epoch << " of " << result.history.size()
            << (result.early_stopped ? " (early stop)" : "") << '\n';
  return 0;
}

// ---------------------------------------------------------------- transduce

int cmd_transduce(const std::string& model_path, const std::vector<std::string>& words,
                  const std::string& input, bool attention, const std::string& script_name) {
  const Script script = parse_script(script_name);
  auto model = restore_model(load_checkpoint(model_path));
  std::vector<std::string> all = words;
  if (!input.empty()) {
    for (std::string& line : read_lines(input)) {
      if (!line.empty()) all.push_back(std::move(line));
    }
  }
  if (all.empty()) throw InvalidArgument("transduce needs --word or --input");
  const bool han = model->config().architecture == Architecture::kHierarchical;
  for (const std::string& w : all) {
    Transduction t = model->transduce(to_script(graphemes(w), script));
    const GraphemeString word = han ? strip_trailing_repeats(t.word, script) : t.word;
    std::cout << to_utf8(word) << '\n';
    if (attention) print_attention(std::cout, t.attention);
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

EvalReport read_predictions(const fs::path& path) {
  std::vector<CognatePair> gold;
  std::vector<GraphemeString> preds;
  std::size_t number = 0;
  for (const std::string& line : read_lines(path)) {
    ++number;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (line.back() == '\t') cols.emplace_back();
    if (cols.size() != 3) throw ParseError(number, "expected source<TAB>gold<TAB>prediction");
    if (number == 1 && cols[0] == "source" && cols[1] == "gold") continue;
    gold.push_back({graphemes(cols[0]), graphemes(cols[1])});
    preds.push_back(graphemes(cols[2]));
  }
  return evaluate(gold, preds);
}

int cmd_evaluate(const std::vector<std::string>& models, const std::vector<std::string>& names,
                 const std::string& data, const std::vector<std::string>& predictions,
                 const std::string& report_path, const std::string& script_name) {
  const Script script = parse_script(script_name);
  std::vector<std::pair<std::string, EvalReport>> rows;
  if (!models.empty()) {
    if (data.empty()) throw InvalidArgument("evaluate --model needs --data");
    const auto pairs = to_script(load_cognate_tsv(data), script);
    for (const std::string& path : models) {
      auto model = restore_model(load_checkpoint(path));
      rows.emplace_back(architecture_name(model->config().architecture),
                        evaluate_model(*model, pairs, script));
    }
  }
  for (const std::string& path : predictions) {
    rows.emplace_back(fs::path(path).stem().string(), read_predictions(path));
  }
  if (rows.empty()) throw InvalidArgument("evaluate needs --model or --predictions");
  for (std::size_t i = 0; i < names.size() && i < rows.size(); ++i) rows[i].first = names[i];
  if (!report_path.empty()) {
    if (rows.size() == 1) {
      if (script != Script::kRaw) annotate_errors(rows[0].second, script);
      save_report_tsv(report_path, rows[0].second);
    } else {
      fs::create_directories(report_path);
      for (auto& [name, rep] : rows) {
        if (script != Script::kRaw) annotate_errors(rep, script);
        save_report_tsv(fs::path(report_path) / (name + ".tsv"), rep);
      }
    }
  }
  std::cout << format_summary(rows);
  return 0;
}

// ---------------------------------------------------------------- pretrain-embed

int cmd_pretrain_lm(const std::string& corpus_path, const std::string& out, CharLMConfig cfg,
                    bool bidirectional) {
  std::ifstream in(corpus_path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + corpus_path);
  std::ostringstream text;
  text << in.rdbuf();
  cfg.direction = bidirectional ? LmDirection::kBidirectional : LmDirection::kForward;
  CharLMResult r = train_char_lm(graphemes(text.str()), cfg);
  save_embeddings(r.table, r.vocab, out);
  std::cout << "perplexity " << std::fixed << std::setprecision(4) << r.perplexity << " after "
            << r.epochs << " epochs\n";
  return 0;
}

int cmd_pretrain_ftavg(const std::string& vectors, const std::string& data,
                       const std::string& out, bool token_weighting) {
  const WordVectorStore store = load_word_vectors(vectors);
  FtAvgResult r;
  CharVocab vocab;
  if (!data.empty()) {
    const auto pairs = load_cognate_tsv(data);
    vocab = build_vocab(pairs);
    std::vector<GraphemeString> words;
    for (const CognatePair& p : pairs) {
      words.push_back(p.source);
      words.push_back(p.target);
    }
    r = ft_avg_embed(store, vocab, words, token_weighting);
  } else {
    std::vector<CognatePair> pseudo;
    for (const auto& [w, v] : store.vectors()) pseudo.push_back({w, w});
    vocab = build_vocab(pseudo);
    r = ft_avg_embed(store, vocab);
  }
  save_embeddings(r.table, vocab, out);
  std::cout << "embedded " << vocab.symbols().size() << " symbols, " << r.missing.size()
            << " without vectors\n";
  return 0;
}

// ---------------------------------------------------------------- tune

int cmd_tune(const std::string& data, const std::string& config,
             const std::vector<std::string>& sets, const std::vector<std::string>& grid,
             std::size_t threads, const std::string& out) {
  RunConfig cfg = base_config(config, sets);
  if (!data.empty()) cfg.data = data;
  if (cfg.data.empty()) throw InvalidArgument("tune needs --data or paths.data");
  GridSpace space;
  for (const std::string& g : grid) space.push_back(parse_grid_axis(g));
  const auto pairs = to_script(load_cognate_tsv(cfg.data), cfg.script);
  DatasetSplit split = split_dataset(pairs, cfg.split_seed);
  std::vector<CognatePair> pool = split.train;
  pool.insert(pool.end(), split.validation.begin(), split.validation.end());
  cfg.train.script = cfg.script;
  const auto cells = grid_search(space, cfg, pool, threads);
  const std::string table = format_grid_table(cells);
  if (!out.empty()) write_file(out, table);
  std::cout << table;
  return 0;
}

// ---------------------------------------------------------------- oov-correct

struct OovArgs {
  std::string pipeline, attention, monolingual, model, out, sizes = "300", script = "raw";
  bool synthetic = false, oracle = false;
  std::uint64_t seed = 11;
  std::size_t sentences = 500;
};

int cmd_oov(const OovArgs& a) {
  const Script script = parse_script(a.script);
  std::vector<PipelineRecord> corpus;
  std::vector<std::string> monolingual;
  if (a.synthetic) {
    SyntheticMtConfig mt;
    mt.seed = a.seed;
    mt.sentences = a.sentences;
    SyntheticMtCorpus c = generate_mt_corpus(mt, default_ruleset());
    corpus = std::move(c.records);
    monolingual = std::move(c.monolingual);
  } else {
    if (a.pipeline.empty() || a.attention.empty() || a.monolingual.empty()) {
      throw InvalidArgument("oov-correct needs --pipeline, --attention and --monolingual");
    }
    corpus = load_pipeline(a.pipeline, a.attention);
    for (const std::string& line : read_lines(a.monolingual)) {
      for (std::string& t : tokenize(line)) monolingual.push_back(std::move(t));
    }
  }
  std::unique_ptr<TransductionModel> model;
  WordTransducer transducer;
  if (a.oracle) {
    const Ruleset rules = default_ruleset();
    transducer = [rules](const GraphemeString& w) { return oracle_transduce(w, rules); };
  } else {
    if (a.model.empty()) throw InvalidArgument("oov-correct needs --model or --oracle");
    model = restore_model(load_checkpoint(a.model));
    transducer = model_transducer(*model, script);
  }
  const std::vector<std::size_t> sizes = parse_sizes(a.sizes);
  const auto rows = evaluate_pipeline(corpus, monolingual, sizes, transducer);
  if (!a.out.empty()) {
    const auto corrections =
        correct_corpus(corpus, build_shortlist(monolingual, sizes.front()), transducer);
    save_corrections(corpus, corrections, a.out);
  }
  std::cout << format_pipeline_table(rows);
  return 0;
}

// ---------------------------------------------------------------- wx

int cmd_wx(bool encode, const std::vector<std::string>& text) {
  auto convert = [&](const std::string& s) {
    const std::u32string in = graphemes(s);
    return to_utf8(encode ? wx_encode(in) : wx_decode(in));
  };
  if (!text.empty()) {
    for (const std::string& t : text) std::cout << convert(t) << '\n';
    return 0;
  }
  for (std::string line; std::getline(std::cin, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::cout << convert(line) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- synth-gen

int cmd_synth_gen(std::uint64_t seed, std::size_t n, const std::string& out,
                  const std::string& mt_out, std::size_t sentences) {
  const auto pairs = generate_pairs(seed, n, default_ruleset());
  if (out.empty()) {
    write_cognate_tsv(std::cout, pairs);
  } else {
    save_cognate_tsv(out, pairs);
  }
  if (!mt_out.empty()) {
    SyntheticMtConfig mt;
    mt.seed = seed;
    mt.sentences = sentences;
    const SyntheticMtCorpus c = generate_mt_corpus(mt, default_ruleset());
    save_pipeline(c.records, mt_out + ".tsv", mt_out + ".att");
    std::string mono;
    for (const std::string& t : c.monolingual) mono += t + '\n';
    write_file(mt_out + ".mono.txt", mono);
  }
  return 0;
}

// ---------------------------------------------------------------- error-report

int cmd_error_report(const std::string& report_path, const std::string& out,
                     const std::string& script_name) {
  Script script = parse_script(script_name);
  std::ifstream in(report_path);
  if (!in) throw InvalidArgument("cannot open " + report_path);
  EvalReport report = read_report_tsv(in);
  if (script == Script::kRaw && !report.items.empty()) {
    script = detect_script(report.items.front().gold);
  }
  if (script == Script::kRaw) throw InvalidArgument("error-report needs Devanagari or WX words");
  annotate_errors(report, script);
  std::map<std::string, std::size_t> counts;
  std::size_t wrong = 0;
  for (const ItemRecord& item : report.items) {
    if (item.correct) continue;
    ++wrong;
    for (const std::string& t : item.tags) ++counts[t];
  }
  if (!out.empty()) save_report_tsv(out, report);
  std::cout << "errors\t" << wrong << " of " << report.items.size() << '\n';
  for (const auto& [tag, n] : counts) std::cout << tag << '\t' << n << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Character-level cognate transduction toolkit", "cogtrans"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "train a model and report on the test split");
  train_cmd->add_option("--data", ta.data, "cognate TSV");
  train_cmd->add_option("--config", ta.config, "run configuration file");
  train_cmd->add_option("--set", ta.sets, "override a setting, key=value");
  train_cmd->add_option("--out", ta.out, "checkpoint directory");
  train_cmd->add_option("--report-dir", ta.report_dir, "report directory");
  train_cmd->add_option("--embeddings", ta.embeddings, "pretrained character embeddings");
  train_cmd->add_option("--average", ta.average, "average the last k snapshots");
  train_cmd->add_flag("--plot", ta.plot, "write SVG charts");
  train_cmd->add_flag("--quiet", ta.quiet, "no per-epoch progress");

  std::string model_path, input, script = "raw";
  std::vector<std::string> words;
  bool attention = false;
  auto* transduce_cmd = app.add_subcommand("transduce", "transduce words with a checkpoint");
  transduce_cmd->add_option("--model", model_path, "checkpoint")->required();
  transduce_cmd->add_option("--word", words, "source word");
  transduce_cmd->add_option("--input", input, "file with one word per line");
  transduce_cmd->add_flag("--attention", attention, "dump the attention matrix");
  transduce_cmd->add_option("--script", script, "devanagari, wx or raw");

  std::vector<std::string> models, names, predictions;
  std::string eval_data, report_path;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "BLEU/SS/WA summary per model");
  evaluate_cmd->add_option("--model", models, "checkpoint (repeatable)");
  evaluate_cmd->add_option("--name", names, "column name per model (repeatable)");
  evaluate_cmd->add_option("--data", eval_data, "cognate TSV to evaluate on");
  evaluate_cmd->add_option("--predictions", predictions,
                           "TSV of source, gold, prediction (repeatable)");
  evaluate_cmd->add_option("--report", report_path, "per-item report TSV (a directory for several)");
  evaluate_cmd->add_option("--script", script, "devanagari, wx or raw");

  auto* pretrain_cmd = app.add_subcommand("pretrain-embed", "pretrain character embeddings");
  pretrain_cmd->require_subcommand(1);
  CharLMConfig lm_cfg;
  std::string corpus_path, emb_out;
  bool bidirectional = false;
  auto* lm_cmd = pretrain_cmd->add_subcommand("lm", "character language model");
  lm_cmd->add_option("--corpus", corpus_path, "monolingual text")->required();
  lm_cmd->add_option("--out", emb_out, "embedding file")->required();
  lm_cmd->add_option("--window", lm_cfg.window, "characters of context per prediction");
  lm_cmd->add_option("--hidden", lm_cfg.hidden, "LSTM hidden size");
  lm_cmd->add_option("--embed-dim", lm_cfg.embed_dim, "embedding size");
  lm_cmd->add_option("--dropout", lm_cfg.dropout, "dropout rate");
  lm_cmd->add_option("--epochs", lm_cfg.max_epochs, "maximum epochs");
  lm_cmd->add_option("--batch-size", lm_cfg.batch_size, "windows per batch");
  lm_cmd->add_option("--stride", lm_cfg.stride, "step between windows");
  lm_cmd->add_option("--seed", lm_cfg.seed, "random seed");
  lm_cmd->add_flag("--bidirectional", bidirectional, "read the context window in both directions");
  std::string vectors, ft_data;
  bool token_weighting = false;
  auto* ft_cmd = pretrain_cmd->add_subcommand("ftavg", "average of word vectors per character");
  ft_cmd->add_option("--vectors", vectors, "word vectors, one 'word v1 v2 ...' per line")
      ->required();
  ft_cmd->add_option("--data", ft_data, "cognate TSV defining the vocabulary");
  ft_cmd->add_option("--out", emb_out, "embedding file")->required();
  ft_cmd->add_flag("--token-weighting", token_weighting, "weight words by corpus frequency");

  std::string tune_data, tune_config, tune_out;
  std::vector<std::string> tune_sets, grid;
  std::size_t threads = 1;
  auto* tune_cmd = app.add_subcommand("tune", "hyperparameter grid search");
  tune_cmd->add_option("--data", tune_data, "cognate TSV");
  tune_cmd->add_option("--config", tune_config, "run configuration file");
  tune_cmd->add_option("--set", tune_sets, "fixed setting, key=value");
  tune_cmd->add_option("--grid", grid, "axis, key=v1,v2,... (repeatable)")->required();
  tune_cmd->add_option("--threads", threads, "parallel trials");
  tune_cmd->add_option("--out", tune_out, "table file");

  OovArgs oa;
  auto* oov_cmd = app.add_subcommand("oov-correct", "replace OOV words in MT output");
  oov_cmd->add_option("--pipeline", oa.pipeline, "TSV of source, baseline, reference");
  oov_cmd->add_option("--attention", oa.attention, "attention matrices file");
  oov_cmd->add_option("--monolingual", oa.monolingual, "source-side monolingual text");
  oov_cmd->add_option("--model", oa.model, "transducer checkpoint");
  oov_cmd->add_flag("--oracle", oa.oracle, "use the synthetic rules as the transducer");
  oov_cmd->add_option("--k", oa.sizes, "shortlist sizes, comma separated");
  oov_cmd->add_option("--out", oa.out, "corrected corpus TSV");
  oov_cmd->add_option("--script", oa.script, "devanagari, wx or raw");
  oov_cmd->add_flag("--synthetic", oa.synthetic, "use a generated corpus");
  oov_cmd->add_option("--seed", oa.seed, "synthetic corpus seed");
  oov_cmd->add_option("--sentences", oa.sentences, "synthetic corpus size");

  auto* wx_cmd = app.add_subcommand("wx", "WX transliteration");
  wx_cmd->require_subcommand(1);
  std::vector<std::string> text;
  auto* wx_encode_cmd = wx_cmd->add_subcommand("encode", "Devanagari to WX");
  wx_encode_cmd->add_option("text", text, "words (default: stdin lines)");
  auto* wx_decode_cmd = wx_cmd->add_subcommand("decode", "WX to Devanagari");
  wx_decode_cmd->add_option("text", text, "words (default: stdin lines)");

  std::uint64_t seed = 7;
  std::size_t n = 3000, sentences = 500;
  std::string synth_out, mt_out;
  auto* synth_cmd = app.add_subcommand("synth-gen", "generate synthetic cognate pairs");
  synth_cmd->add_option("--seed", seed, "generator seed");
  synth_cmd->add_option("--n", n, "number of pairs");
  synth_cmd->add_option("--out", synth_out, "TSV (default: stdout)");
  synth_cmd->add_option("--mt-out", mt_out, "also write an MT corpus with this path prefix");
  synth_cmd->add_option("--sentences", sentences, "MT corpus size");

  std::string err_report, err_out;
  auto* error_cmd = app.add_subcommand("error-report", "tag errors in a report TSV");
  error_cmd->add_option("--report", err_report, "report TSV")->required();
  error_cmd->add_option("--out", err_out, "annotated report TSV");
  error_cmd->add_option("--script", script, "devanagari or wx (default: detected)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    CLI::App* shown = &app;
    for (CLI::App* sub : app.get_subcommands()) shown = sub;
    std::cerr << shown->help();
    return 2;
  }

  try {
    if (*train_cmd) return cmd_train(ta);
    if (*transduce_cmd) return cmd_transduce(model_path, words, input, attention, script);
    if (*evaluate_cmd) {
      return cmd_evaluate(models, names, eval_data, predictions, report_path, script);
    }
    if (*lm_cmd) return cmd_pretrain_lm(corpus_path, emb_out, lm_cfg, bidirectional);
    if (*ft_cmd) return cmd_pretrain_ftavg(vectors, ft_data, emb_out, token_weighting);
    if (*tune_cmd) return cmd_tune(tune_data, tune_config, tune_sets, grid, threads, tune_out);
    if (*oov_cmd) return cmd_oov(oa);
    if (*wx_encode_cmd) return cmd_wx(true, text);
    if (*wx_decode_cmd) return cmd_wx(false, text);
    if (*synth_cmd) return cmd_synth_gen(seed, n, synth_out, mt_out, sentences);
    if (*error_cmd) return cmd_error_report(err_report, err_out, script);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace cogtrans
