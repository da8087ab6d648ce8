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

#include "patchqa/corpus.hpp"

namespace patchqa::cli {

// Generated corpus with a planted answer signal: each bug gets `keywords`
// unique made-up words; its developer patch (and any correct APR patch)
// describes the fix with the same words, while incorrect APR patches use
// words that occur in no bug report. Everything else is drawn from a shared
// filler vocabulary.
struct SyntheticOptions {
  int bugs = 200;
  int keywords = 3;
  double apr_correct_rate = 0.3;
  int apr_incorrect_per_bug = 1;
  // Filler words in the bug report body: uniform in [min, min + spread].
  // Zero leaves the report as a title only.
  int body_min_words = 0;
  int body_spread = 0;
  // Share of APR patches shipped without a description (summarized from the
  // diff instead).
  double missing_description_rate = 0.1;
  // Planted words open the bug title and the description (in the same
  // order) instead of being shuffled among the fillers.
  bool keywords_lead = true;
  std::uint64_t seed = 11;
};

corpus::Dataset MakeSyntheticDataset(const SyntheticOptions& options);

}  // namespace patchqa::cli
