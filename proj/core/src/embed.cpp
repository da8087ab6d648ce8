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

#include "patchqa/embed.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "patchqa/error.hpp"
#include "patchqa/random.hpp"

namespace patchqa::embed {

namespace {

bool IsTokenChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '#' || c == '.';
}

char ToLowerAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

TokenSequence Tokenize(std::string_view text) {
  TokenSequence seq;
  std::string current;
  for (char raw : text) {
    const char c = ToLowerAscii(raw);
    if (IsTokenChar(c)) {
      current.push_back(c);
    } else if (!current.empty()) {
      seq.tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) seq.tokens.push_back(std::move(current));
  return seq;
}

std::size_t DistinctWordCount(std::string_view text) {
  const auto seq = Tokenize(text);
  return std::set<std::string>(seq.tokens.begin(), seq.tokens.end()).size();
}

std::vector<double> EmbeddingProvider::Lookup(std::string_view token) const {
  std::vector<double> v(static_cast<std::size_t>(dim()));
  Lookup(token, v);
  return v;
}

HashSeededEmbedding::HashSeededEmbedding(int dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim < 1) throw InvalidArgument("embedding dim must be positive");
}

void HashSeededEmbedding::Lookup(std::string_view token,
                                 std::span<double> out) const {
  Rng rng(HashString(token, seed_));
  for (auto& x : out) x = rng.Normal();
}

FileBackedEmbedding::FileBackedEmbedding(int dim, std::uint64_t fallback_seed)
    : dim_(dim), fallback_(dim, fallback_seed) {}

FileBackedEmbedding FileBackedEmbedding::Read(std::istream& in,
                                              std::uint64_t fallback_seed) {
  std::string line;
  std::size_t line_no = 0;
  int dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream header(line);
    std::string keyword;
    if (!(header >> keyword)) continue;
    if (keyword != "dim" || !(header >> dim) || dim < 1) {
      throw ParseError("expected header \"dim <D>\" with D > 0", line_no);
    }
    break;
  }
  if (dim < 1) throw ParseError("missing \"dim <D>\" header", 1);

  FileBackedEmbedding provider(dim, fallback_seed);
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(dim));
    std::string value;
    while (fields >> value) {
      double x = 0.0;
      const auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), x);
      if (ec != std::errc() || ptr != value.data() + value.size() ||
          !std::isfinite(x)) {
        throw ParseError("bad vector component \"" + value + "\"", line_no);
      }
      v.push_back(x);
    }
    if (v.size() != static_cast<std::size_t>(dim)) {
      throw ParseError("token \"" + token + "\" has " +
                           std::to_string(v.size()) + " components, expected " +
                           std::to_string(dim),
                       line_no);
    }
    if (!provider.table_.emplace(token, std::move(v)).second) {
      throw ParseError("duplicate token \"" + token + "\"", line_no);
    }
  }
  return provider;
}

FileBackedEmbedding FileBackedEmbedding::Load(const std::filesystem::path& path,
                                              std::uint64_t fallback_seed) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return Read(in, fallback_seed);
}

bool FileBackedEmbedding::Contains(std::string_view token) const {
  return table_.contains(std::string(token));
}

void FileBackedEmbedding::Lookup(std::string_view token,
                                 std::span<double> out) const {
  const auto it = table_.find(std::string(token));
  if (it == table_.end()) {
    fallback_.Lookup(token, out);
    return;
  }
  std::copy(it->second.begin(), it->second.end(), out.begin());
}

SequenceMatrix Prepare(const TokenSequence& seq,
                       const EmbeddingProvider& provider,
                       std::size_t max_seq_len) {
  if (max_seq_len < 1) throw InvalidArgument("max_seq_len must be >= 1");
  if (provider.dim() < 1) throw InvalidArgument("provider dim must be >= 1");

  SequenceMatrix m;
  m.rows = Matrix(max_seq_len, static_cast<std::size_t>(provider.dim()));
  m.mask.assign(max_seq_len, 0);
  m.length = std::min(seq.size(), max_seq_len);
  m.truncated = seq.truncated || seq.size() > max_seq_len;
  for (std::size_t t = 0; t < m.length; ++t) {
    provider.Lookup(seq.tokens[t], m.rows.row(t));
    m.mask[t] = 1;
  }
  return m;
}

SequenceMatrix PrepareText(std::string_view text,
                           const EmbeddingProvider& provider,
                           std::size_t max_seq_len) {
  return Prepare(Tokenize(text), provider, max_seq_len);
}

std::vector<double> SentenceVector(std::string_view text,
                                   const EmbeddingProvider& provider) {
  const auto seq = Tokenize(text);
  std::vector<double> mean(static_cast<std::size_t>(provider.dim()), 0.0);
  if (seq.tokens.empty()) return mean;
  std::vector<double> v(mean.size());
  for (const auto& token : seq.tokens) {
    provider.Lookup(token, v);
    for (std::size_t i = 0; i < v.size(); ++i) mean[i] += v[i];
  }
  for (auto& x : mean) x /= static_cast<double>(seq.tokens.size());
  return mean;
}

std::vector<std::vector<double>> Standardize(
    const std::vector<std::vector<double>>& vectors) {
  if (vectors.size() < 2) {
    throw InvalidArgument("standardize needs at least two vectors");
  }
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InvalidArgument("vectors differ in dimension");
  }
  const double n = static_cast<double>(vectors.size());
  std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t j = 0; j < dim; ++j) mean[j] += v[j];
  }
  for (auto& m : mean) m /= n;
  for (const auto& v : vectors) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = v[j] - mean[j];
      sd[j] += d * d;
    }
  }
  for (auto& s : sd) s = std::sqrt(s / n);

  // Relative cutoff: a column whose spread is rounding noise is constant.
  std::vector<std::vector<double>> out(vectors.size(), std::vector<double>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    const double scale = std::max(1.0, std::abs(mean[j]));
    const bool constant = sd[j] <= 1e-12 * scale;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      out[i][j] = constant ? 0.0 : (vectors[i][j] - mean[j]) / sd[j];
    }
  }
  return out;
}

}  // namespace patchqa::embed
