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

#include "patchqa/pairing.hpp"

#include <algorithm>

#include "json.hpp"
#include "patchqa/diffsum.hpp"
#include "patchqa/error.hpp"
#include "patchqa/random.hpp"

namespace patchqa::pairing {

namespace {

using corpus::Dataset;
using corpus::Label;
using corpus::PatchRecord;

bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

const std::string& BugText(const Dataset& dataset, const std::string& bug_id,
                           std::string& storage) {
  storage = dataset.bugs().at(bug_id).Text();
  if (IsBlank(storage)) {
    throw InvalidArgument("bug \"" + bug_id + "\" has an empty report");
  }
  return storage;
}

}  // namespace

std::string_view ToString(ExampleKind kind) {
  switch (kind) {
    case ExampleKind::kDevPositive:
      return "dev_positive";
    case ExampleKind::kAprPositive:
      return "apr_positive";
    case ExampleKind::kRandomMismatch:
      return "random_mismatch";
    case ExampleKind::kAprNegative:
      return "apr_negative";
  }
  return "apr_negative";
}

int LabelOf(ExampleKind kind) {
  return kind == ExampleKind::kDevPositive || kind == ExampleKind::kAprPositive
             ? 1
             : 0;
}

std::optional<std::string> ResolveDescription(const Dataset& dataset,
                                              const PatchRecord& patch) {
  if (const auto* d = dataset.FindDescription(patch.patch_id)) return d->text;
  try {
    const auto hunks = diffsum::ParseUnifiedDiff(patch.diff);
    if (hunks.empty()) return std::nullopt;
    return diffsum::Summarize(hunks);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::vector<QaExample> BuildPositiveExamples(const Dataset& dataset) {
  std::vector<QaExample> out;
  std::string text;
  for (const auto& [id, patch] : dataset.patches()) {
    if (patch.label != Label::kCorrect) continue;
    auto description = ResolveDescription(dataset, patch);
    if (!description) continue;
    const auto kind = patch.origin.developer ? ExampleKind::kDevPositive
                                             : ExampleKind::kAprPositive;
    out.push_back({patch.bug_id, patch.patch_id, patch.bug_id,
                   BugText(dataset, patch.bug_id, text),
                   std::move(*description), 1, kind});
  }
  return out;
}

std::vector<QaExample> BuildRandomMismatches(const Dataset& dataset,
                                             std::uint64_t seed) {
  std::set<std::string> developer_bugs;
  for (const auto& [id, patch] : dataset.patches()) {
    if (patch.origin.developer) developer_bugs.insert(patch.bug_id);
  }
  const std::vector<std::string> pool(developer_bugs.begin(),
                                      developer_bugs.end());
  if (pool.size() < 2) {
    throw InvalidArgument(
        "random mismatches need at least two bugs with developer patches");
  }

  Rng rng(Mix64(seed ^ 0x6d69736dULL));
  std::vector<QaExample> out;
  std::string text;
  for (const auto& [id, patch] : dataset.patches()) {
    if (!patch.origin.developer) continue;
    auto description = ResolveDescription(dataset, patch);
    if (!description) continue;
    // Uniform over pool \ {x}: draw from |pool|-1 slots and skip x.
    const auto self = static_cast<std::size_t>(
        std::lower_bound(pool.begin(), pool.end(), patch.bug_id) -
        pool.begin());
    std::size_t pick = rng.Below(pool.size() - 1);
    if (pick >= self) ++pick;
    const std::string& other = pool[pick];
    out.push_back({other, patch.patch_id + "@" + other, patch.bug_id,
                   BugText(dataset, other, text), std::move(*description), 0,
                   ExampleKind::kRandomMismatch});
  }
  return out;
}

std::vector<QaExample> BuildAprNegatives(const Dataset& dataset) {
  std::vector<QaExample> out;
  std::string text;
  for (const auto& [id, patch] : dataset.patches()) {
    if (patch.label != Label::kIncorrect) continue;
    auto description = ResolveDescription(dataset, patch);
    if (!description) continue;
    out.push_back({patch.bug_id, patch.patch_id, patch.bug_id,
                   BugText(dataset, patch.bug_id, text),
                   std::move(*description), 0, ExampleKind::kAprNegative});
  }
  return out;
}

std::vector<QaExample> BuildExamples(const Dataset& dataset,
                                     std::uint64_t seed) {
  auto out = BuildPositiveExamples(dataset);
  auto mismatches = BuildRandomMismatches(dataset, seed);
  auto negatives = BuildAprNegatives(dataset);
  out.insert(out.end(), std::make_move_iterator(mismatches.begin()),
             std::make_move_iterator(mismatches.end()));
  out.insert(out.end(), std::make_move_iterator(negatives.begin()),
             std::make_move_iterator(negatives.end()));
  return out;
}

std::set<std::string> ExampleBugIds(const std::vector<QaExample>& examples) {
  std::set<std::string> ids;
  for (const auto& e : examples) ids.insert(e.bug_id);
  return ids;
}

std::vector<std::string> FoldPlan::BugsInGroup(int group) const {
  std::vector<std::string> out;
  for (const auto& [bug, g] : assignments) {
    if (g == group) out.push_back(bug);
  }
  return out;
}

FoldPlan MakeFoldPlan(const std::set<std::string>& bug_ids, int k,
                      std::uint64_t seed) {
  if (k <= 0) throw InvalidArgument("fold count k must be positive");
  if (static_cast<std::size_t>(k) > bug_ids.size()) {
    throw InvalidArgument("fold count k=" + std::to_string(k) +
                          " exceeds the number of bugs (" +
                          std::to_string(bug_ids.size()) + ")");
  }
  std::vector<std::string> ids(bug_ids.begin(), bug_ids.end());
  Rng rng(Mix64(seed ^ 0x666f6c64ULL));
  rng.Shuffle(ids);
  FoldPlan plan{k, seed, {}};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    plan.assignments.emplace(ids[i], static_cast<int>(i % k));
  }
  return plan;
}

std::string FoldPlanToJson(const FoldPlan& plan) {
  nlohmann::ordered_json j;
  j["seed"] = plan.seed;
  j["k"] = plan.k;
  j["assignments"] = plan.assignments;
  return j.dump(2) + "\n";
}

FoldPlan FoldPlanFromJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    FoldPlan plan;
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.k = j.at("k").get<int>();
    plan.assignments = j.at("assignments").get<std::map<std::string, int>>();
    for (const auto& [bug, g] : plan.assignments) {
      if (g < 0 || g >= plan.k) {
        throw ParseError("bug \"" + bug + "\" assigned to group " +
                         std::to_string(g) + " outside [0, k)");
      }
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed fold plan: ") + e.what());
  }
}

std::vector<int> AssignGroups(const std::vector<QaExample>& examples,
                              const FoldPlan& plan) {
  std::vector<int> groups;
  groups.reserve(examples.size());
  for (const auto& e : examples) {
    const auto it = plan.assignments.find(e.bug_id);
    if (it == plan.assignments.end()) {
      throw InvalidArgument("bug \"" + e.bug_id + "\" has no fold assignment");
    }
    groups.push_back(it->second);
  }
  return groups;
}

Split FoldSplit(const std::vector<QaExample>& examples, const FoldPlan& plan,
                int test_group) {
  if (test_group < 0 || test_group >= plan.k) {
    throw InvalidArgument("test group " + std::to_string(test_group) +
                          " outside [0, " + std::to_string(plan.k) + ")");
  }
  const auto groups = AssignGroups(examples, plan);
  Split split;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    (groups[i] == test_group ? split.test : split.train).push_back(examples[i]);
  }
  return split;
}

}  // namespace patchqa::pairing
