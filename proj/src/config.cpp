// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t to_size(const std::string& v) {
  std::size_t pos = 0;
  const long long x = std::stoll(v, &pos);
  if (pos != v.size() || x < 0) throw InvalidArgument("expected a non-negative integer: " + v);
  return static_cast<std::size_t>(x);
}

double to_double(const std::string& v) {
  std::size_t pos = 0;
  const double x = std::stod(v, &pos);
  if (pos != v.size()) throw InvalidArgument("expected a number: " + v);
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("expected a boolean: " + v);
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"paths.data", [](RunConfig& c, const std::string& v) { c.data = v; }},
      {"paths.vectors", [](RunConfig& c, const std::string& v) { c.vectors = v; }},
      {"paths.embeddings", [](RunConfig& c, const std::string& v) { c.embeddings = v; }},
      {"paths.checkpoints", [](RunConfig& c, const std::string& v) { c.checkpoints = v; }},
      {"paths.reports", [](RunConfig& c, const std::string& v) { c.reports = v; }},
      {"run.script", [](RunConfig& c, const std::string& v) { c.script = parse_script(v); }},
      {"run.split_seed", [](RunConfig& c, const std::string& v) { c.split_seed = to_size(v); }},
      {"run.average_last", [](RunConfig& c, const std::string& v) { c.average_last = to_size(v); }},
      {"model.architecture",
       [](RunConfig& c, const std::string& v) { c.model.architecture = parse_architecture(v); }},
      {"model.cell", [](RunConfig& c, const std::string& v) { c.model.cell = parse_cell_kind(v); }},
      {"model.hidden_dim", [](RunConfig& c, const std::string& v) { c.model.hidden_dim = to_size(v); }},
      {"model.encoder_layers",
       [](RunConfig& c, const std::string& v) { c.model.encoder_layers = to_size(v); }},
      {"model.decoder_layers",
       [](RunConfig& c, const std::string& v) { c.model.decoder_layers = to_size(v); }},
      {"model.embed_dim", [](RunConfig& c, const std::string& v) { c.model.embed_dim = to_size(v); }},
      {"model.attention_dim",
       [](RunConfig& c, const std::string& v) { c.model.attention_dim = to_size(v); }},
      {"model.dropout", [](RunConfig& c, const std::string& v) { c.model.dropout = to_double(v); }},
      {"model.num_layers", [](RunConfig& c, const std::string& v) { c.model.num_layers = to_size(v); }},
      {"model.num_heads", [](RunConfig& c, const std::string& v) { c.model.num_heads = to_size(v); }},
      {"model.d_model", [](RunConfig& c, const std::string& v) { c.model.d_model = to_size(v); }},
      {"model.ffn_dim", [](RunConfig& c, const std::string& v) { c.model.ffn_dim = to_size(v); }},
      {"model.chunk_size", [](RunConfig& c, const std::string& v) { c.model.chunk_size = to_size(v); }},
      {"model.max_decode_len",
       [](RunConfig& c, const std::string& v) { c.model.max_decode_len = to_size(v); }},
      {"model.beam_width", [](RunConfig& c, const std::string& v) { c.model.beam_width = to_size(v); }},
      {"train.batch_size", [](RunConfig& c, const std::string& v) { c.train.batch_size = to_size(v); }},
      {"train.max_epochs", [](RunConfig& c, const std::string& v) { c.train.max_epochs = to_size(v); }},
      {"train.patience", [](RunConfig& c, const std::string& v) { c.train.patience = to_size(v); }},
      {"train.l2", [](RunConfig& c, const std::string& v) { c.train.l2 = to_double(v); }},
      {"train.seed", [](RunConfig& c, const std::string& v) { c.train.seed = to_size(v); }},
      {"train.val_fraction",
       [](RunConfig& c, const std::string& v) { c.train.val_fraction = to_double(v); }},
      {"train.shuffle_each_epoch",
       [](RunConfig& c, const std::string& v) { c.train.shuffle_each_epoch = to_bool(v); }},
      {"train.keep_last", [](RunConfig& c, const std::string& v) { c.train.keep_last = to_size(v); }},
      {"train.validation_metrics",
       [](RunConfig& c, const std::string& v) { c.train.validation_metrics = to_bool(v); }},
      {"optimizer.kind",
       [](RunConfig& c, const std::string& v) { c.optimizer.kind = parse_optimizer(v); }},
      {"optimizer.lr", [](RunConfig& c, const std::string& v) { c.optimizer.lr = to_double(v); }},
      {"optimizer.decay", [](RunConfig& c, const std::string& v) { c.optimizer.decay = to_double(v); }},
      {"optimizer.momentum",
       [](RunConfig& c, const std::string& v) { c.optimizer.momentum = to_double(v); }},
      {"optimizer.beta1", [](RunConfig& c, const std::string& v) { c.optimizer.beta1 = to_double(v); }},
      {"optimizer.beta2", [](RunConfig& c, const std::string& v) { c.optimizer.beta2 = to_double(v); }},
      {"optimizer.rho", [](RunConfig& c, const std::string& v) { c.optimizer.rho = to_double(v); }},
      {"optimizer.epsilon",
       [](RunConfig& c, const std::string& v) { c.optimizer.epsilon = to_double(v); }},
      {"optimizer.clip_norm",
       [](RunConfig& c, const std::string& v) { c.optimizer.clip_norm = to_double(v); }},
      {"optimizer.warmup_steps",
       [](RunConfig& c, const std::string& v) { c.optimizer.warmup_steps = to_size(v); }},
  };
  return table;
}

}  // namespace

std::filesystem::path default_checkpoint_dir() {
  const char* env = std::getenv("COGTRANS_CHECKPOINT_DIR");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("checkpoints");
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto it = setters().find(key);
  if (it == setters().end()) throw InvalidArgument("unknown setting '" + key + "'");
  try {
    it->second(cfg, value);
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("bad value '" + value + "' for " + key);
  } catch (const std::out_of_range&) {
    throw InvalidArgument("value '" + value + "' out of range for " + key);
  }
}

std::vector<std::string> setting_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, s] : setters()) keys.push_back(k);
  return keys;
}

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.checkpoints = default_checkpoint_dir();
  std::string line, section;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(number, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    try {
      apply_setting(cfg, full, value);
    } catch (const InvalidArgument& e) {
      throw ParseError(number, e.what());
    }
  }
  for (auto* p : {&cfg.data, &cfg.vectors, &cfg.embeddings, &cfg.checkpoints, &cfg.reports}) {
    if (!p->empty() && p->is_relative() && !base_dir.empty()) *p = base_dir / *p;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  RunConfig cfg = parse_run_config(in, path.parent_path());
  for (const auto* p : {&cfg.data, &cfg.vectors, &cfg.embeddings}) {
    if (!p->empty() && !std::filesystem::exists(*p)) {
      throw InvalidArgument("configured path does not exist: " + p->string());
    }
  }
  return cfg;
}

}  // namespace cogtrans
