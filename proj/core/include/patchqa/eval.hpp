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
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace patchqa::eval {

struct ScoredLabel {
  double score = 0.0;
  int label = 0;  // 1 = correct patch
};

struct ConfusionMatrix {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) =
      default;
};

// Predicts 1 iff score >= t.
ConfusionMatrix ConfusionAt(std::span<const ScoredLabel> data, double t);

// tp / (tp + fn): share of correct patches recalled. Throws UndefinedMetric
// when there are no positives.
double PlusRecall(const ConfusionMatrix& cm);

// tn / (tn + fp): share of incorrect patches filtered out. Throws
// UndefinedMetric when there are no negatives.
double MinusRecall(const ConfusionMatrix& cm);

// 2tp / (2tp + fp + fn). Throws UndefinedMetric when the denominator is 0.
double F1(const ConfusionMatrix& cm);

// Probability that a random positive outscores a random negative, ties
// counting 1/2. Computed from midranks in O(n log n). Throws UndefinedMetric
// unless both classes are present.
double Auc(std::span<const ScoredLabel> data);

struct MwwResult {
  // Rank-sum U of sample_a: #(a > b) + 0.5 * #(a == b) over all pairs.
  double u_statistic = 0.0;
  double z = 0.0;
  // Two-sided, normal approximation with tie-corrected variance.
  double p_value = 1.0;
};

// Mann-Whitney-Wilcoxon rank-sum test. Throws InvalidArgument when either
// sample has fewer than 3 values, UndefinedMetric when every value in both
// samples is identical.
MwwResult MannWhitneyU(std::span<const double> sample_a,
                       std::span<const double> sample_b);

double Median(std::vector<double> values);

double EuclideanDistance(std::span<const double> a, std::span<const double> b);

using VectorPair = std::pair<std::vector<double>, std::vector<double>>;

struct DistanceStudy {
  std::vector<double> original_distances;
  std::vector<double> random_distances;
  double original_median = 0.0;
  double random_median = 0.0;
  MwwResult test;  // sample_a = original, sample_b = random

  // Original pairs are closer, significantly at level `alpha`.
  bool Supports(double alpha) const {
    return original_median < random_median && test.p_value < alpha;
  }
};

// Per-pair L2 distances for matched and random (bug, description) vector
// pairs, compared with a Mann-Whitney-Wilcoxon test. Inputs are expected to
// be standardized already. Throws InvalidArgument on a dimension mismatch.
DistanceStudy EuclideanDistanceStudy(std::span<const VectorPair> original_pairs,
                                     std::span<const VectorPair> random_pairs);

// Character-level edit distance (insert, delete, substitute; unit costs).
std::size_t Levenshtein(std::string_view a, std::string_view b);

struct ThresholdSweep {
  std::vector<double> thresholds;
  std::vector<ConfusionMatrix> matrices;
  // nullopt where the metric is undefined for the data.
  std::vector<std::optional<double>> plus_recall;
  std::vector<std::optional<double>> minus_recall;
  std::vector<std::optional<double>> f1;
  std::optional<double> auc;

  // Index of the threshold maximising +Recall + -Recall (lowest threshold on
  // ties); nullopt when no threshold has both recalls defined.
  std::optional<std::size_t> BestIndex() const;
};

// Throws InvalidArgument unless thresholds are sorted ascending.
ThresholdSweep SweepThresholds(std::span<const ScoredLabel> data,
                               std::span<const double> thresholds);

// 0.1, 0.2, ..., 0.9.
std::vector<double> DefaultThresholds();

}  // namespace patchqa::eval
