/*
 * Copyright 2026 The patchqa Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "patchqa/matrix.hpp"

namespace patchqa::embed {

struct TokenSequence {
  std::vector<std::string> tokens;
  bool truncated = false;

  std::size_t size() const { return tokens.size(); }
};

// Lowercases and splits on every character outside [a-z0-9_#.]. Empty tokens
// are dropped; order and duplicates are kept.
TokenSequence Tokenize(std::string_view text);

// Number of unique tokens produced by Tokenize.
std::size_t DistinctWordCount(std::string_view text);

// Maps a token to a fixed-dimension real vector. Implementations are
// immutable after construction and safe to share across threads.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual int dim() const = 0;

  // Writes the vector for `token` into `out` (size dim()).
  virtual void Lookup(std::string_view token, std::span<double> out) const = 0;

  std::vector<double> Lookup(std::string_view token) const;
};

// Deterministic pseudo-random vector per token: components are i.i.d.
// standard normals drawn from a generator seeded with a 64-bit hash of
// (seed, token).
class HashSeededEmbedding final : public EmbeddingProvider {
 public:
  HashSeededEmbedding(int dim, std::uint64_t seed);

  int dim() const override { return dim_; }
  std::uint64_t seed() const { return seed_; }
  void Lookup(std::string_view token, std::span<double> out) const override;
  using EmbeddingProvider::Lookup;

 private:
  int dim_;
  std::uint64_t seed_;
};

// Static vectors read from a text file:
//
//   dim <D>
//   <token> v1 ... vD
//
// Tokens missing from the table fall back to a HashSeededEmbedding with the
// given seed.
class FileBackedEmbedding final : public EmbeddingProvider {
 public:
  static FileBackedEmbedding Read(std::istream& in,
                                  std::uint64_t fallback_seed);
  static FileBackedEmbedding Load(const std::filesystem::path& path,
                                  std::uint64_t fallback_seed);

  int dim() const override { return dim_; }
  std::size_t vocabulary_size() const { return table_.size(); }
  bool Contains(std::string_view token) const;
  void Lookup(std::string_view token, std::span<double> out) const override;
  using EmbeddingProvider::Lookup;

 private:
  FileBackedEmbedding(int dim, std::uint64_t fallback_seed);

  int dim_;
  HashSeededEmbedding fallback_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

// A fixed-shape (max_seq_len x dim) input matrix. Rows past `length` are
// zero padding.
struct SequenceMatrix {
  Matrix rows;
  std::vector<std::uint8_t> mask;  // 1 for real tokens, 0 for padding
  std::size_t length = 0;          // number of leading real tokens
  bool truncated = false;

  std::size_t max_len() const { return rows.rows(); }
  int dim() const { return static_cast<int>(rows.cols()); }
};

// Embeds the first `max_seq_len` tokens row-wise and zero-pads the tail.
// Throws InvalidArgument when max_seq_len < 1 or the provider dim < 1.
SequenceMatrix Prepare(const TokenSequence& seq,
                       const EmbeddingProvider& provider,
                       std::size_t max_seq_len);

// Tokenize followed by Prepare.
SequenceMatrix PrepareText(std::string_view text,
                           const EmbeddingProvider& provider,
                           std::size_t max_seq_len);

// Mean of the token vectors of `text`; the zero vector for empty text.
std::vector<double> SentenceVector(std::string_view text,
                                   const EmbeddingProvider& provider);

// Column-wise z-score with the population standard deviation. Columns with
// zero variance map to 0. Throws InvalidArgument for fewer than two vectors
// or unequal dimensions.
std::vector<std::vector<double>> Standardize(
    const std::vector<std::vector<double>>& vectors);

}  // namespace patchqa::embed
