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

#include <benchmark/benchmark.h>

#include "patchqa/embed.hpp"
#include "patchqa/qa_model.hpp"
#include "patchqa/random.hpp"

namespace patchqa {
namespace {

embed::SequenceMatrix Sequence(Rng& rng, std::size_t max_len, std::size_t dim,
                               std::size_t length) {
  embed::SequenceMatrix m;
  m.rows = Matrix(max_len, dim);
  m.mask.assign(max_len, 0);
  m.length = length;
  for (std::size_t t = 0; t < length; ++t) {
    m.mask[t] = 1;
    for (auto& x : m.rows.row(t)) x = rng.Normal();
  }
  return m;
}

struct Fixture {
  qa::QaModel model;
  qa::BatchExample example;
};

// Default-sized model (N = 64, hidden 16) over `dim`-wide inputs, with both
// texts at `length` tokens.
Fixture Make(std::size_t dim, std::size_t length) {
  qa::ModelConfig config;
  Rng rng(1);
  return {qa::QaModel::Initialize(dim, config),
          {Sequence(rng, config.max_seq_len, dim, length),
           Sequence(rng, config.max_seq_len, dim, length), 1}};
}

void BM_BiLstmForward(benchmark::State& state) {
  const auto f = Make(static_cast<std::size_t>(state.range(0)), 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qa::BiLstmForward(f.model, f.example.bug));
  }
}
BENCHMARK(BM_BiLstmForward)->Arg(32)->Arg(128)->Arg(768);

void BM_Score(benchmark::State& state) {
  const auto f = Make(128, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qa::Score(f.model, f.example));
  }
}
BENCHMARK(BM_Score)->Arg(8)->Arg(32)->Arg(64);

void BM_AccumulateGradient(benchmark::State& state) {
  const auto f = Make(128, static_cast<std::size_t>(state.range(0)));
  qa::QaParams grad(f.model.params());
  for (auto _ : state) {
    grad.SetZero();
    benchmark::DoNotOptimize(qa::AccumulateGradient(f.model, f.example, grad));
  }
}
BENCHMARK(BM_AccumulateGradient)->Arg(8)->Arg(32)->Arg(64);

void BM_Tokenize(benchmark::State& state) {
  const std::string text =
      "NumberUtils#createNumber - bad behaviour for leading \"--\". "
      "NumberUtils#createNumber checks for a leading \"--\" in the string, and "
      "returns null if found.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(embed::Tokenize(text));
  }
}
BENCHMARK(BM_Tokenize);

}  // namespace
}  // namespace patchqa
