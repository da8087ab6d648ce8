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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "patchqa/corpus.hpp"
#include "patchqa/embed.hpp"
#include "patchqa/error.hpp"
#include "patchqa/eval.hpp"
#include "patchqa/pairing.hpp"
#include "patchqa/qa_model.hpp"

namespace patchqa::cli {

// Where token vectors come from: a vector file when `embeddings` is set,
// otherwise hash-seeded vectors of dimension `hash_dim`.
struct EmbeddingConfig {
  std::string embeddings;  // path; empty = hash-seeded
  std::uint64_t hash_seed = 7;
  int hash_dim = 128;
};

struct RunConfig {
  std::string dataset;
  EmbeddingConfig embedding;
  qa::ModelConfig model;  // model.seed is the model seed
  int k = 10;
  std::uint64_t fold_seed = 1;
  std::uint64_t pair_seed = 2;
  double threshold = 0.5;  // operating threshold
  std::vector<double> thresholds = eval::DefaultThresholds();
  std::filesystem::path out = "out";
  int threads = 1;
};

std::unique_ptr<embed::EmbeddingProvider> MakeProvider(
    const EmbeddingConfig& config);

// Compact provider tag stored in checkpoints: "hash:<dim>:<seed>" or
// "file:<seed>".
std::string ProviderTag(const EmbeddingConfig& config);

// Inverse of ProviderTag. A "file:" tag needs `embeddings_path`.
EmbeddingConfig ParseProviderTag(const std::string& tag,
                                 const std::string& embeddings_path);

qa::BatchExample ToBatch(const std::string& bug_text,
                         const std::string& description_text, int label,
                         const embed::EmbeddingProvider& provider,
                         std::size_t max_seq_len);

// Loads the dataset and removes duplicate patches.
struct IngestResult {
  corpus::Dataset dataset;
  std::size_t duplicates_removed = 0;
};
IngestResult Ingest(const std::filesystem::path& path);

// Counts per label/origin/source, as JSON text.
std::string IngestSummaryJson(const IngestResult& ingest);

struct ScoredExample {
  pairing::QaExample example;
  int fold = 0;
  double score = 0.0;
};

struct FoldResult {
  int fold = 0;
  std::size_t train_examples = 0;
  std::size_t test_examples = 0;
  std::vector<double> epoch_loss;
  std::optional<double> auc, f1, plus_recall, minus_recall;
};

struct MismatchAblation {
  std::size_t recalled_positives = 0;
  double mean_score_before = 0.0;
  double mean_score_after = 0.0;
  std::size_t fell_below_threshold = 0;
  double fraction_below = 0.0;
};

struct CrossValidationResult {
  pairing::FoldPlan plan;
  std::vector<FoldResult> folds;
  std::vector<ScoredExample> scores;  // in fold order, then example order
  eval::ThresholdSweep sweep;
  std::optional<MismatchAblation> ablation;
  std::string report_json;
  std::string scores_csv;
  std::string foldplan_json;
};

// Pairing -> k training rounds -> evaluation. Writes report.json,
// scores.csv, foldplan.json and model_fold<i>.ckpt under config.out when
// write_outputs is set. Errors are rethrown tagged with the failing stage.
CrossValidationResult CrossValidate(const RunConfig& config,
                                    bool write_outputs = true);

// Trains one model on every labeled example of the dataset.
qa::TrainResult TrainAll(const RunConfig& config);

struct HypothesisResult {
  eval::DistanceStudy study;
  std::string report_json;
};

// Original (bug, developer description) pairs against seeded random
// re-pairings, on standardized sentence vectors.
HypothesisResult HypothesisStudy(const RunConfig& config);

// Reads a scores CSV (patch_id,bug_id,label,score).
std::vector<eval::ScoredLabel> ReadScoresCsv(const std::filesystem::path& path);

// Threshold sweep and AUC over a score list, as JSON text.
std::string EvaluationJson(const std::vector<eval::ScoredLabel>& scores,
                           const std::vector<double>& thresholds);

// An error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Runs `fn`, rethrowing any error prefixed with "<stage>: ".
template <typename F>
auto Stage(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace patchqa::cli
