// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/checkpoint.hpp"

#include <zlib.h>
#include <unistd.h>

#include <bit>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "COGTRANS-CKPT\n";

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64_le(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

std::uint32_t crc_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

json model_to_json(const ModelConfig& c) {
  return json{{"architecture", architecture_name(c.architecture)},
              {"cell", cell_kind_name(c.cell)},
              {"hidden_dim", c.hidden_dim},
              {"encoder_layers", c.encoder_layers},
              {"decoder_layers", c.decoder_layers},
              {"embed_dim", c.embed_dim},
              {"attention_dim", c.attention_dim},
              {"dropout", c.dropout},
              {"num_layers", c.num_layers},
              {"num_heads", c.num_heads},
              {"d_model", c.d_model},
              {"ffn_dim", c.ffn_dim},
              {"chunk_size", c.chunk_size},
              {"max_decode_len", c.max_decode_len},
              {"beam_width", c.beam_width}};
}

ModelConfig model_from_json(const json& j) {
  ModelConfig c;
  c.architecture = parse_architecture(j.at("architecture").get<std::string>());
  c.cell = parse_cell_kind(j.at("cell").get<std::string>());
  c.hidden_dim = j.at("hidden_dim");
  c.encoder_layers = j.at("encoder_layers");
  c.decoder_layers = j.at("decoder_layers");
  c.embed_dim = j.at("embed_dim");
  c.attention_dim = j.at("attention_dim");
  c.dropout = j.at("dropout");
  c.num_layers = j.at("num_layers");
  c.num_heads = j.at("num_heads");
  c.d_model = j.at("d_model");
  c.ffn_dim = j.at("ffn_dim");
  c.chunk_size = j.at("chunk_size");
  c.max_decode_len = j.at("max_decode_len");
  c.beam_width = j.at("beam_width");
  return c;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InvalidArgument("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  json header;
  header["version"] = kCheckpointVersion;
  header["model"] = model_to_json(ckpt.model);
  std::vector<std::uint32_t> symbols(ckpt.vocab.symbols().begin(), ckpt.vocab.symbols().end());
  header["vocab"] = symbols;
  header["epoch"] = ckpt.epoch;
  header["train_loss"] = ckpt.train_loss;
  header["val_loss"] = ckpt.val_loss;
  header["metrics"] = {{"bleu", ckpt.metrics.bleu}, {"ss", ckpt.metrics.ss}, {"wa", ckpt.metrics.wa}};
  json arrays = json::array();
  std::string payload;
  for (const auto& [name, t] : ckpt.params) {
    arrays.push_back({{"name", name}, {"shape", t.shape}, {"trainable", t.requires_grad}});
    for (double x : t.data) put_u64_le(payload, std::bit_cast<std::uint64_t>(x));
  }
  header["arrays"] = std::move(arrays);
  const std::string text = header.dump();
  std::string out(kMagic);
  out += std::to_string(text.size()) + "\n";
  out += text;
  out += payload;
  const std::uint32_t crc = crc_of(out);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((crc >> (8 * i)) & 0xff));
  return out;
}

Checkpoint parse_checkpoint(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 4 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw ChecksumError("not a checkpoint file");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) {
    stored |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[body.size() + i]))
              << (8 * i);
  }
  if (crc_of(body) != stored) throw ChecksumError("checkpoint checksum mismatch");

  std::size_t pos = kMagic.size();
  const std::size_t eol = body.find('\n', pos);
  if (eol == std::string_view::npos) throw ChecksumError("missing header length");
  const std::size_t header_len = std::stoull(std::string(body.substr(pos, eol - pos)));
  pos = eol + 1;
  if (pos + header_len > body.size()) throw ChecksumError("header runs past the end");
  json header;
  try {
    header = json::parse(body.substr(pos, header_len));
  } catch (const json::exception& e) {
    throw ChecksumError(std::string("unreadable header: ") + e.what());
  }
  pos += header_len;
  const int version = header.value("version", -1);
  if (version != kCheckpointVersion) {
    throw IncompatibleCheckpoint("checkpoint format version " + std::to_string(version) +
                                 ", expected " + std::to_string(kCheckpointVersion));
  }
  Checkpoint c;
  try {
    c.model = model_from_json(header.at("model"));
    std::vector<char32_t> symbols;
    for (std::uint32_t s : header.at("vocab").get<std::vector<std::uint32_t>>()) {
      symbols.push_back(static_cast<char32_t>(s));
    }
    c.vocab = CharVocab(std::move(symbols));
    c.epoch = header.at("epoch");
    c.train_loss = header.at("train_loss");
    c.val_loss = header.at("val_loss");
    const json& m = header.at("metrics");
    c.metrics = {m.at("bleu"), m.at("ss"), m.at("wa")};
    for (const json& a : header.at("arrays")) {
      Tensor t(a.at("shape").get<Shape>());
      const std::size_t n = t.size();
      if (pos + 8 * n > body.size()) throw ChecksumError("parameter data truncated");
      for (std::size_t i = 0; i < n; ++i) {
        t.data[i] = std::bit_cast<double>(get_u64_le(body.data() + pos + 8 * i));
      }
      pos += 8 * n;
      c.params.add(a.at("name").get<std::string>(), std::move(t), a.at("trainable").get<bool>());
    }
  } catch (const json::exception& e) {
    throw ChecksumError(std::string("malformed header: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw IncompatibleCheckpoint(e.what());
  }
  if (pos != body.size()) throw ChecksumError("trailing bytes after parameter data");
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_file_atomically(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(read_file(path));
}

Checkpoint load_checkpoint(const std::filesystem::path& path, Architecture expected) {
  Checkpoint c = load_checkpoint(path);
  if (c.model.architecture != expected) {
    throw IncompatibleCheckpoint(std::string("checkpoint holds a ") +
                                 architecture_name(c.model.architecture) + " model, not " +
                                 architecture_name(expected));
  }
  return c;
}

void save_embeddings(const EmbeddingTable& table, const CharVocab& vocab,
                     const std::filesystem::path& path) {
  Checkpoint c;
  c.vocab = vocab;
  c.model.embed_dim = table.table.cols();
  c.params.add("embed", table.table, table.trainable);
  save_checkpoint(c, path);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, CharVocab* vocab) {
  Checkpoint c = load_checkpoint(path);
  if (!c.params.contains("embed")) throw IncompatibleCheckpoint("file holds no embedding table");
  if (vocab) *vocab = c.vocab;
  const Tensor& t = c.params.at("embed");
  EmbeddingTable table;
  table.table = Tensor(t.shape, t.data);
  table.trainable = t.requires_grad;
  return table;
}

}  // namespace cogtrans
