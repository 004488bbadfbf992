// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cogtrans/trainer.hpp"

namespace cogtrans {

inline constexpr int kCheckpointVersion = 1;

// Layout: the magic line "COGTRANS-CKPT", a decimal header length line, a JSON
// header (version, model config, vocabulary, epoch, losses, metrics and the
// array directory), the parameter arrays as little-endian float64, and a
// little-endian CRC-32 of everything before it.
std::string serialize_checkpoint(const Checkpoint& ckpt);
// Throws ChecksumError for damaged bytes and IncompatibleCheckpoint for an
// unknown format version.
Checkpoint parse_checkpoint(std::string_view bytes);

// Writes to a temporary file in the same directory, then renames it.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);
// Also throws IncompatibleCheckpoint when the stored architecture differs.
Checkpoint load_checkpoint(const std::filesystem::path& path, Architecture expected);

// Embedding tables persist in the same container, as a checkpoint holding a
// single "embed" array.
void save_embeddings(const EmbeddingTable& table, const CharVocab& vocab,
                     const std::filesystem::path& path);
EmbeddingTable load_embeddings(const std::filesystem::path& path, CharVocab* vocab = nullptr);

}  // namespace cogtrans
