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

#include "patchqa/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "patchqa/error.hpp"

namespace patchqa::eval {

namespace {

// Midranks (1-based) of `values`; also returns sum over tie groups of
// t^3 - t.
std::vector<double> MidRanks(std::span<const double> values,
                             double* tie_term) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  double ties = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = midrank;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  if (tie_term) *tie_term = ties;
  return ranks;
}

}  // namespace

ConfusionMatrix ConfusionAt(std::span<const ScoredLabel> data, double t) {
  ConfusionMatrix cm;
  for (const auto& d : data) {
    const bool predicted = d.score >= t;
    if (d.label) {
      (predicted ? cm.tp : cm.fn)++;
    } else {
      (predicted ? cm.fp : cm.tn)++;
    }
  }
  return cm;
}

double PlusRecall(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) {
    throw UndefinedMetric("+Recall is undefined without correct patches");
  }
  return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double MinusRecall(const ConfusionMatrix& cm) {
  if (cm.tn + cm.fp == 0) {
    throw UndefinedMetric("-Recall is undefined without incorrect patches");
  }
  return static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
}

double F1(const ConfusionMatrix& cm) {
  const long denom = 2 * cm.tp + cm.fp + cm.fn;
  if (denom == 0) throw UndefinedMetric("F1 is undefined: 2tp + fp + fn = 0");
  return 2.0 * static_cast<double>(cm.tp) / static_cast<double>(denom);
}

double Auc(std::span<const ScoredLabel> data) {
  std::vector<double> scores;
  scores.reserve(data.size());
  double positives = 0.0;
  for (const auto& d : data) {
    scores.push_back(d.score);
    if (d.label) positives += 1.0;
  }
  const double negatives = static_cast<double>(data.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw UndefinedMetric("AUC needs at least one positive and one negative");
  }
  const auto ranks = MidRanks(scores, nullptr);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].label) rank_sum += ranks[i];
  }
  const double u = rank_sum - positives * (positives + 1.0) / 2.0;
  return u / (positives * negatives);
}

MwwResult MannWhitneyU(std::span<const double> sample_a,
                       std::span<const double> sample_b) {
  if (sample_a.size() < 3 || sample_b.size() < 3) {
    throw InvalidArgument("Mann-Whitney test needs at least 3 values per sample");
  }
  std::vector<double> pooled(sample_a.begin(), sample_a.end());
  pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
  double tie_term = 0.0;
  const auto ranks = MidRanks(pooled, &tie_term);

  const double n1 = static_cast<double>(sample_a.size());
  const double n2 = static_cast<double>(sample_b.size());
  const double n = n1 + n2;
  const double rank_sum_a =
      std::accumulate(ranks.begin(), ranks.begin() + sample_a.size(), 0.0);

  MwwResult r;
  r.u_statistic = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
  const double variance =
      n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) {
    throw UndefinedMetric("Mann-Whitney test has zero variance: all values tie");
  }
  r.z = (r.u_statistic - n1 * n2 / 2.0) / std::sqrt(variance);
  r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  return r;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw UndefinedMetric("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("Euclidean distance of vectors with unequal dims");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

DistanceStudy EuclideanDistanceStudy(std::span<const VectorPair> original_pairs,
                                     std::span<const VectorPair> random_pairs) {
  DistanceStudy study;
  std::size_t dim = 0;
  bool have_dim = false;
  auto distances = [&](std::span<const VectorPair> pairs,
                       std::vector<double>& out) {
    for (const auto& [a, b] : pairs) {
      if (!have_dim) {
        dim = a.size();
        have_dim = true;
      }
      if (a.size() != dim || b.size() != dim) {
        throw InvalidArgument("distance study vectors differ in dimension");
      }
      out.push_back(EuclideanDistance(a, b));
    }
  };
  distances(original_pairs, study.original_distances);
  distances(random_pairs, study.random_distances);
  study.test = MannWhitneyU(study.original_distances, study.random_distances);
  study.original_median = Median(study.original_distances);
  study.random_median = Median(study.random_distances);
  return study;
}

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::optional<std::size_t> ThresholdSweep::BestIndex() const {
  std::optional<std::size_t> best;
  double best_value = -1.0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!plus_recall[i] || !minus_recall[i]) continue;
    const double v = *plus_recall[i] + *minus_recall[i];
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

ThresholdSweep SweepThresholds(std::span<const ScoredLabel> data,
                               std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw InvalidArgument("thresholds must be sorted ascending");
  }
  auto defined = [](auto metric, const ConfusionMatrix& cm)
      -> std::optional<double> {
    try {
      return metric(cm);
    } catch (const UndefinedMetric&) {
      return std::nullopt;
    }
  };
  ThresholdSweep sweep;
  sweep.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double t : thresholds) {
    const auto cm = ConfusionAt(data, t);
    sweep.matrices.push_back(cm);
    sweep.plus_recall.push_back(defined(PlusRecall, cm));
    sweep.minus_recall.push_back(defined(MinusRecall, cm));
    sweep.f1.push_back(defined(F1, cm));
  }
  try {
    sweep.auc = Auc(data);
  } catch (const UndefinedMetric&) {
    sweep.auc = std::nullopt;
  }
  return sweep;
}

std::vector<double> DefaultThresholds() {
  std::vector<double> t;
  for (int i = 1; i <= 9; ++i) t.push_back(i / 10.0);
  return t;
}

}  // namespace patchqa::eval
