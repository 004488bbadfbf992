// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cogtrans/errors.hpp"
#include "cogtrans/optimizer.hpp"

namespace cogtrans {

void WordVectorStore::add(GraphemeString word, std::vector<double> vector) {
  if (vector.empty()) throw InvalidShape("empty word vector");
  if (!vectors_.empty() && vector.size() != dim_) {
    throw InvalidShape("word vector of dimension " + std::to_string(vector.size()) +
                       ", expected " + std::to_string(dim_));
  }
  if (vectors_.count(word)) throw InvalidArgument("duplicate word '" + to_utf8(word) + "'");
  dim_ = vector.size();
  vectors_.emplace(std::move(word), std::move(vector));
}

const std::vector<double>* WordVectorStore::find(const GraphemeString& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

WordVectorStore read_word_vectors(std::istream& in) {
  WordVectorStore store;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> v;
    std::string tok;
    while (fields >> tok) {
      try {
        v.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ParseError(number, "bad number '" + tok + "'");
      }
    }
    if (number == 1 && v.size() == 1 && word.find_first_not_of("0123456789") == std::string::npos) {
      continue;  // "count dim" header
    }
    if (v.empty()) throw ParseError(number, "word without a vector");
    try {
      store.add(graphemes(word), std::move(v));
    } catch (const Error& e) {
      throw ParseError(number, e.what());
    }
  }
  return store;
}

WordVectorStore load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return read_word_vectors(in);
}

FtAvgResult ft_avg_embed(const WordVectorStore& store, const CharVocab& vocab,
                         std::span<const GraphemeString> corpus, bool token_weighting) {
  if (store.empty()) throw EmptyInput("word-vector store is empty");
  std::map<GraphemeString, double> weight;
  for (const GraphemeString& w : corpus) {
    if (!store.find(w)) continue;
    if (token_weighting) {
      weight[w] += 1.0;
    } else {
      weight[w] = 1.0;
    }
  }
  const std::size_t D = store.dim(), V = vocab.size();
  std::vector<double> sums(V * D, 0.0), counts(V, 0.0);
  for (const auto& [word, wt] : weight) {
    const std::vector<double>& v = *store.find(word);
    for (char32_t c : word) {
      if (!vocab.contains(c)) continue;
      const std::size_t id = vocab.id(c);
      counts[id] += wt;
      for (std::size_t k = 0; k < D; ++k) sums[id * D + k] += wt * v[k];
    }
  }
  FtAvgResult out;
  out.table.table = Tensor({V, D});
  for (std::size_t id = CharVocab::kNumSpecials; id < V; ++id) {
    if (counts[id] == 0.0) {
      out.missing.push_back(vocab.symbol(id));
      continue;
    }
    for (std::size_t k = 0; k < D; ++k) out.table.table(id, k) = sums[id * D + k] / counts[id];
  }
  return out;
}

FtAvgResult ft_avg_embed(const WordVectorStore& store, const CharVocab& vocab) {
  std::vector<GraphemeString> words;
  for (const auto& [w, v] : store.vectors()) words.push_back(w);
  return ft_avg_embed(store, vocab, words, false);
}

EmbeddingTable remap_embeddings(const EmbeddingTable& table, const CharVocab& from,
                                const CharVocab& to) {
  if (table.table.rows() != from.size()) {
    throw InvalidShape("embedding table rows do not match its vocabulary");
  }
  const std::size_t D = table.table.cols();
  EmbeddingTable out;
  out.trainable = table.trainable;
  out.table = Tensor({to.size(), D});
  for (std::size_t id = 0; id < to.size(); ++id) {
    std::size_t src = id;
    if (!CharVocab::is_special(id)) {
      const char32_t c = to.symbol(id);
      if (!from.contains(c)) continue;
      src = from.id(c);
    }
    std::copy_n(table.table.data.begin() + src * D, D, out.table.data.begin() + id * D);
  }
  return out;
}

std::vector<std::vector<double>> CharPredictor::predict_batch(
    std::span<const std::vector<std::size_t>> contexts) const {
  std::vector<std::vector<double>> out;
  out.reserve(contexts.size());
  for (const auto& c : contexts) out.push_back(predict(c));
  return out;
}

double perplexity(const CharPredictor& lm, const CharVocab& vocab,
                  std::u32string_view held_out) {
  const std::vector<std::size_t> ids = vocab.encode(held_out);
  const std::size_t ctx = std::max<std::size_t>(1, lm.context_length());
  std::vector<std::vector<std::size_t>> contexts;
  std::vector<std::size_t> targets;
  if (ids.size() > ctx) {
    for (std::size_t i = ctx; i < ids.size(); ++i) {
      contexts.emplace_back(ids.begin() + (i - ctx), ids.begin() + i);
      targets.push_back(ids[i]);
    }
  } else {
    for (std::size_t i = 1; i < ids.size(); ++i) {
      contexts.emplace_back(ids.begin(), ids.begin() + i);
      targets.push_back(ids[i]);
    }
  }
  if (targets.empty()) throw EmptyInput("held-out text has nothing to predict");
  double nll = 0.0;
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < targets.size(); start += kChunk) {
    const std::size_t end = std::min(targets.size(), start + kChunk);
    const bool same_length = ids.size() > ctx;
    std::vector<std::vector<double>> probs;
    if (same_length) {
      probs = lm.predict_batch(std::span(contexts).subspan(start, end - start));
    } else {
      for (std::size_t i = start; i < end; ++i) probs.push_back(lm.predict(contexts[i]));
    }
    for (std::size_t i = start; i < end; ++i) {
      nll -= std::log(probs[i - start].at(targets[i]) + kLogFloor);
    }
  }
  return std::exp(nll / static_cast<double>(targets.size()));
}

namespace {

class LstmCharModel : public CharPredictor {
 public:
  LstmCharModel(const CharLMConfig& cfg, std::size_t vocab, Rng& rng) : cfg_(cfg), vocab_(vocab) {
    params_.add("lm.embed", uniform_tensor({vocab, cfg.embed_dim}, kInitRange, rng));
    add_cell(params_, "lm.fwd", CellKind::kLstm, cfg.embed_dim, cfg.hidden, rng);
    std::size_t out_in = cfg.hidden;
    if (cfg.direction == LmDirection::kBidirectional) {
      add_cell(params_, "lm.bwd", CellKind::kLstm, cfg.embed_dim, cfg.hidden, rng);
      out_in *= 2;
    }
    params_.add("lm.out.W", uniform_tensor({out_in, vocab}, kInitRange, rng));
    params_.add("lm.out.b", Tensor({1, vocab}));
  }

  std::size_t vocab_size() const override { return vocab_; }
  std::size_t context_length() const override { return cfg_.window - 1; }
  ParamSet& params() { return params_; }

  Var logits(Graph& g, std::span<const std::vector<std::size_t>> contexts, bool train,
             Rng& rng) {
    const std::size_t B = contexts.size(), T = contexts.front().size();
    Var table = g.param(params_.at("lm.embed"));
    std::vector<Var> steps;
    std::vector<std::size_t> ids(B);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t b = 0; b < B; ++b) ids[b] = contexts[b][t];
      steps.push_back(dropout(embed(table, ids), cfg_.dropout, train, rng));
    }
    BoundCell fwd = bind_cell(g, params_, {CellKind::kLstm, cfg_.embed_dim, cfg_.hidden, "lm.fwd"});
    Var feature;
    if (cfg_.direction == LmDirection::kBidirectional) {
      BoundCell bwd =
          bind_cell(g, params_, {CellKind::kLstm, cfg_.embed_dim, cfg_.hidden, "lm.bwd"});
      feature = bidirectional_encode(steps, fwd, bwd).final_state;
    } else {
      RecurrentState s = initial_state(g, fwd.spec, B);
      for (Var x : steps) s = cell_step(fwd, x, s);
      feature = s.h;
    }
    feature = dropout(feature, cfg_.dropout, train, rng);
    return add(matmul(feature, g.param(params_.at("lm.out.W"))), g.param(params_.at("lm.out.b")));
  }

  std::vector<double> predict(std::span<const std::size_t> context) const override {
    std::vector<std::vector<std::size_t>> one{{context.begin(), context.end()}};
    if (one[0].size() > context_length()) {
      one[0].erase(one[0].begin(), one[0].end() - static_cast<std::ptrdiff_t>(context_length()));
    }
    if (one[0].empty()) return std::vector<double>(vocab_, 1.0 / static_cast<double>(vocab_));
    return predict_batch(one).front();
  }

  std::vector<std::vector<double>> predict_batch(
      std::span<const std::vector<std::size_t>> contexts) const override {
    Graph g(false);
    Rng unused(0);
    auto* self = const_cast<LstmCharModel*>(this);  // a non-recording graph only reads
    const Tensor probs = softmax(self->logits(g, contexts, false, unused)).value();
    std::vector<std::vector<double>> out(contexts.size());
    for (std::size_t b = 0; b < contexts.size(); ++b) {
      out[b].assign(probs.data.begin() + b * vocab_, probs.data.begin() + (b + 1) * vocab_);
    }
    return out;
  }

 private:
  CharLMConfig cfg_;
  std::size_t vocab_;
  ParamSet params_;
};

}  // namespace

CharLMResult train_char_lm(std::u32string_view corpus, const CharLMConfig& cfg) {
  if (cfg.window < 2) throw InvalidArgument("window must be >= 2");
  if (corpus.size() <= cfg.window) {
    throw InvalidArgument("corpus of " + std::to_string(corpus.size()) +
                          " characters is not longer than the window");
  }
  if (cfg.stride < 1 || cfg.batch_size < 1) throw InvalidArgument("stride and batch_size >= 1");
  CharLMResult result;
  result.vocab = CharVocab(std::vector<char32_t>(corpus.begin(), corpus.end()));
  const std::vector<std::size_t> ids = result.vocab.encode(corpus);
  std::size_t split = ids.size() - static_cast<std::size_t>(
                                       std::floor(cfg.held_out_fraction * ids.size()));
  split = std::max(split, cfg.window);
  const std::u32string_view held_out = corpus.substr(std::min(split, corpus.size()));

  const std::size_t ctx = cfg.window - 1;
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + cfg.window <= split; s += cfg.stride) starts.push_back(s);

  Rng rng(cfg.seed);
  auto model = std::make_shared<LstmCharModel>(cfg, result.vocab.size(), rng);
  OptimizerSpec spec;
  spec.lr = cfg.lr;
  Optimizer opt(spec);
  auto make_batch = [&](std::size_t from, std::size_t to, std::vector<std::size_t>& targets) {
    std::vector<std::vector<std::size_t>> contexts;
    targets.clear();
    for (std::size_t k = from; k < to; ++k) {
      const std::size_t s = starts[k];
      contexts.emplace_back(ids.begin() + s, ids.begin() + s + ctx);
      targets.push_back(ids[s + ctx]);
    }
    return contexts;
  };

  double best = std::numeric_limits<double>::infinity();
  ParamSet best_params = model->params().snapshot();
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(starts.begin(), starts.end(), rng);
    for (std::size_t from = 0; from < starts.size(); from += cfg.batch_size) {
      const std::size_t to = std::min(starts.size(), from + cfg.batch_size);
      std::vector<std::size_t> targets;
      auto contexts = make_batch(from, to, targets);
      std::vector<double> weights(targets.size(), 1.0 / static_cast<double>(targets.size()));
      Graph g;
      Var loss = softmax_cross_entropy(model->logits(g, contexts, true, rng), targets, weights);
      if (!std::isfinite(loss.value().data[0])) {
        throw DivergedError(static_cast<int>(epoch), "language-model loss is not finite");
      }
      model->params().zero_grad();
      g.backward(loss);
      opt.step(model->params());
    }
    result.epochs = epoch;
    const double ppl = held_out.size() >= 2 ? perplexity(*model, result.vocab, held_out) : 0.0;
    if (ppl < best) {
      best = ppl;
      best_params = model->params().snapshot();
      since_best = 0;
    } else if (++since_best > cfg.patience) {
      break;
    }
  }
  for (auto& [name, t] : best_params) model->params().at(name).data = t.data;
  result.perplexity = held_out.size() >= 2 ? perplexity(*model, result.vocab, held_out) : 0.0;
  const Tensor& emb = model->params().at("lm.embed");
  result.table.table = Tensor(emb.shape, emb.data);
  result.table.trainable = true;
  result.model = model;
  return result;
}

}  // namespace cogtrans
