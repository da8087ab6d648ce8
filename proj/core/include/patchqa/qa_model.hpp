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
#include <span>
#include <string>
#include <vector>

#include "patchqa/embed.hpp"
#include "patchqa/matrix.hpp"

namespace patchqa::qa {

// Training and shape hyper-parameters. Defaults are the published settings.
struct ModelConfig {
  std::size_t max_seq_len = 64;
  std::size_t hidden_size = 16;  // per direction
  double learning_rate = 0.01;
  int epochs = 10;
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless every field is positive.
  void Validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// One LSTM direction. Gate blocks are stacked row-wise in the order input,
// forget, cell candidate, output: rows [k*H, (k+1)*H) belong to gate k.
struct LstmCellParams {
  Matrix input_weights;      // 4H x D
  Matrix recurrent_weights;  // 4H x H
  std::vector<double> bias;  // 4H

  LstmCellParams() = default;
  LstmCellParams(std::size_t hidden, std::size_t input_dim);

  std::size_t hidden() const { return recurrent_weights.cols(); }
  std::size_t input_dim() const { return input_weights.cols(); }

  friend bool operator==(const LstmCellParams&, const LstmCellParams&) = default;
};

// Every learnable tensor. Doubles as the gradient container.
struct QaParams {
  LstmCellParams forward;
  LstmCellParams backward;

  QaParams() = default;
  QaParams(std::size_t hidden, std::size_t input_dim)
      : forward(hidden, input_dim), backward(hidden, input_dim) {}

  // Fixed order: forward W, U, b, then backward W, U, b.
  std::vector<std::span<double>> Tensors();
  std::vector<std::span<const double>> Tensors() const;
  std::vector<std::string> TensorNames() const;

  void SetZero();
  bool AllFinite() const;

  friend bool operator==(const QaParams&, const QaParams&) = default;
};

// The BiLSTM-attention-cosine scorer. Both input sequences share the same
// pair of LSTM cells.
class QaModel {
 public:
  // All parameters zero.
  QaModel(std::size_t input_dim, ModelConfig config);

  // Parameters uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] with
  // fan_in = input_dim + hidden, drawn from config.seed.
  static QaModel Initialize(std::size_t input_dim, ModelConfig config);

  const ModelConfig& config() const { return config_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden() const { return config_.hidden_size; }
  // Width of one BiLSTM output row.
  std::size_t output_dim() const { return 2 * config_.hidden_size; }

  QaParams& params() { return params_; }
  const QaParams& params() const { return params_; }

  // Free-form note on how inputs were embedded; stored in checkpoints.
  const std::string& embedding_source() const { return embedding_source_; }
  void set_embedding_source(std::string s) { embedding_source_ = std::move(s); }

  friend bool operator==(const QaModel&, const QaModel&) = default;

 private:
  std::size_t input_dim_;
  ModelConfig config_;
  QaParams params_;
  std::string embedding_source_;
};

// A (bug report, patch description) pair ready for the model.
struct BatchExample {
  embed::SequenceMatrix bug;
  embed::SequenceMatrix description;
  int label = 0;
};

// Row t = [forward h_t, backward h_t] for t < m.length. Both directions run
// over the real tokens only, so the backward pass starts at the last real
// token. Padding rows are zero. Throws InvalidArgument on a dim mismatch.
Matrix BiLstmForward(const QaModel& model, const embed::SequenceMatrix& m);

// Softmax over e_b * xc restricted to positions with mask set; masked
// positions get weight 0. Throws InvalidArgument when every position is
// masked or dimensions disagree.
std::vector<double> AttentionWeights(const Matrix& e_b,
                                     std::span<const double> xc,
                                     std::span<const std::uint8_t> mask);

// Sum over n of alpha[n] * row n of e_b.
std::vector<double> AttentionApply(std::span<const double> alpha,
                                   const Matrix& e_b);

double Sigmoid(double x);

// Cosine similarity; 0 when either vector has zero norm.
double Cosine(std::span<const double> a, std::span<const double> b);

// sigmoid(cosine(re_b, re_c)).
double ScoreRepresentations(std::span<const double> re_b,
                            std::span<const double> re_c);

// The flattened bug (re_b) and attended description (re_c) vectors, each of
// length max_seq_len * 2H.
struct Representations {
  std::vector<double> bug;
  std::vector<double> description;
};
Representations Represent(const QaModel& model, const BatchExample& ex);

// Probability that the description answers the bug report. Always within
// [sigmoid(-1), sigmoid(1)].
double Score(const QaModel& model, const BatchExample& ex);

// Binary cross-entropy and its derivative with respect to the score.
double Loss(double score, int label);
double LossGradient(double score, int label);

// Gradients of one example's loss.
struct ExampleGradient {
  double score = 0.0;
  double loss = 0.0;
};

// Computes the loss of `ex` and adds d loss / d parameter into `grad` (which
// must have the model's shapes). When non-null, d_bug_input and
// d_description_input receive d loss / d input embedding (same shape as the
// input matrices, zero on padding).
ExampleGradient AccumulateGradient(const QaModel& model, const BatchExample& ex,
                                   QaParams& grad,
                                   Matrix* d_bug_input = nullptr,
                                   Matrix* d_description_input = nullptr);

// Adam with the usual defaults (beta1 0.9, beta2 0.999, eps 1e-8).
class AdamOptimizer {
 public:
  AdamOptimizer(const QaParams& shape, double learning_rate,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void Step(QaParams& params, const QaParams& grad);
  long steps() const { return step_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long step_ = 0;
  QaParams m_, v_;
};

struct TrainResult {
  QaModel model;
  std::vector<double> epoch_loss;  // mean training loss per epoch
};

// Mini-batch training: examples are shuffled each epoch with a generator
// seeded from config.seed, per-batch gradients are averaged in a fixed order,
// and there is no early stopping. Throws InvalidArgument for an empty
// example list and Error on a non-finite loss.
TrainResult Train(QaModel model, const std::vector<BatchExample>& examples,
                  const ModelConfig& config);

struct Prediction {
  int label = 0;
  double score = 0.0;
};

// label = 1 iff score >= threshold.
Prediction Predict(const QaModel& model, const BatchExample& ex,
                   double threshold);

// Text checkpoint. Numbers are written in shortest round-trip form, so
// save -> load -> save is byte-identical.
void WriteCheckpoint(const QaModel& model, std::ostream& out);
QaModel ReadCheckpoint(std::istream& in);
void SaveCheckpoint(const QaModel& model, const std::filesystem::path& path);
QaModel LoadCheckpoint(const std::filesystem::path& path);

}  // namespace patchqa::qa
