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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patchqa/corpus.hpp"

namespace patchqa::pairing {

enum class ExampleKind { kDevPositive, kAprPositive, kRandomMismatch, kAprNegative };

std::string_view ToString(ExampleKind kind);

// Label implied by an example kind: 1 for the positive kinds.
int LabelOf(ExampleKind kind);

// One (bug report, patch description) pair with its match label.
struct QaExample {
  std::string bug_id;        // bug whose report is the question
  std::string patch_id;      // "<patch>@<bug>" for random mismatches
  std::string patch_bug_id;  // bug the patch was written for
  std::string bug_text;
  std::string description_text;
  int label = 0;
  ExampleKind kind = ExampleKind::kAprNegative;

  friend bool operator==(const QaExample&, const QaExample&) = default;
};

// The ingested description when present, otherwise the rule-based summary of
// the diff. nullopt when neither is available (no description and a diff
// that does not parse into any hunk).
std::optional<std::string> ResolveDescription(const corpus::Dataset& dataset,
                                              const corpus::PatchRecord& patch);

// One example per correct patch with a resolvable description. Throws
// InvalidArgument when such a patch belongs to a bug with a blank report.
std::vector<QaExample> BuildPositiveExamples(const corpus::Dataset& dataset);

// For every developer patch of bug x, pairs its description with a bug
// y != x drawn uniformly (seeded) from the other bugs that have developer
// patches. Throws InvalidArgument when fewer than two such bugs exist.
std::vector<QaExample> BuildRandomMismatches(const corpus::Dataset& dataset,
                                             std::uint64_t seed);

// One example per incorrect patch, paired with its own bug report.
std::vector<QaExample> BuildAprNegatives(const corpus::Dataset& dataset);

// Positives, then random mismatches, then APR negatives.
std::vector<QaExample> BuildExamples(const corpus::Dataset& dataset,
                                     std::uint64_t seed);

// Distinct bug ids routed by the examples (bugs with no usable example are
// absent).
std::set<std::string> ExampleBugIds(const std::vector<QaExample>& examples);

struct FoldPlan {
  int k = 10;
  std::uint64_t seed = 0;
  std::map<std::string, int> assignments;  // bug_id -> group in [0, k)

  std::vector<std::string> BugsInGroup(int group) const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

// Shuffles the (sorted) bug ids with `seed` and deals them round-robin into
// k groups. Throws InvalidArgument when k <= 0 or k > |bug_ids|.
FoldPlan MakeFoldPlan(const std::set<std::string>& bug_ids, int k,
                      std::uint64_t seed);

// {"seed": ..., "k": ..., "assignments": {bug_id: group}}.
std::string FoldPlanToJson(const FoldPlan& plan);
FoldPlan FoldPlanFromJson(std::string_view json);

struct Split {
  std::vector<QaExample> train;
  std::vector<QaExample> test;
};

// Group of each example's bug_id, index-aligned with `examples`. Throws
// InvalidArgument for an example whose bug has no assignment.
std::vector<int> AssignGroups(const std::vector<QaExample>& examples,
                              const FoldPlan& plan);

// An example is tested iff the group of its bug_id (the bug whose report it
// carries) equals test_group. Throws InvalidArgument for an out-of-range
// group or an example whose bug has no assignment.
Split FoldSplit(const std::vector<QaExample>& examples, const FoldPlan& plan,
                int test_group);

}  // namespace patchqa::pairing
