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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace patchqa::corpus {

// The question side of a QA pair. Comments are never stored.
struct BugReport {
  std::string bug_id;
  std::string title;
  std::string body;

  // Text fed to the model: title and body joined by a newline.
  std::string Text() const;

  friend bool operator==(const BugReport&, const BugReport&) = default;
};

enum class Label { kCorrect, kIncorrect, kUnlabeled };

// Where a patch came from: the developer fix, or a named APR tool.
struct Origin {
  bool developer = true;
  std::string tool;  // empty for developer patches

  static Origin Developer() { return {}; }
  static Origin AprTool(std::string name) { return {false, std::move(name)}; }

  friend bool operator==(const Origin&, const Origin&) = default;
};

struct PatchRecord {
  std::string patch_id;
  std::string bug_id;
  std::string diff;
  Origin origin;
  Label label = Label::kUnlabeled;

  friend bool operator==(const PatchRecord&, const PatchRecord&) = default;
};

enum class DescriptionSource { kHumanCommitMessage, kGenerated };

struct PatchDescription {
  std::string patch_id;
  std::string text;
  DescriptionSource source = DescriptionSource::kHumanCommitMessage;

  friend bool operator==(const PatchDescription&, const PatchDescription&) =
      default;
};

// Bugs, patches and descriptions with referential integrity enforced on
// every insertion. Ordered maps keep iteration (and therefore every derived
// artifact) deterministic.
class Dataset {
 public:
  // Each Add* throws InvalidArgument on a duplicate key, a dangling
  // reference, or an empty required field.
  void AddBug(BugReport bug);
  void AddPatch(PatchRecord patch);
  void AddDescription(PatchDescription description);

  const std::map<std::string, BugReport>& bugs() const { return bugs_; }
  const std::map<std::string, PatchRecord>& patches() const { return patches_; }
  const std::map<std::string, PatchDescription>& descriptions() const {
    return descriptions_;
  }

  const BugReport* FindBug(std::string_view bug_id) const;
  const PatchDescription* FindDescription(std::string_view patch_id) const;

  bool empty() const { return bugs_.empty() && patches_.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::map<std::string, BugReport> bugs_;
  std::map<std::string, PatchRecord> patches_;
  std::map<std::string, PatchDescription> descriptions_;
};

// Parses the line-delimited JSON dataset format. Blank lines are skipped.
// Records may appear in any order; references are resolved after the whole
// stream is read. Errors carry the 1-based line number of the offending
// record.
Dataset ReadDataset(std::istream& in);
Dataset LoadDataset(const std::filesystem::path& path);

// Writes bugs, then patches, then descriptions, each in key order.
void WriteDataset(const Dataset& dataset, std::ostream& out);
void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);

// Strips trailing whitespace from every line and collapses runs of blank
// lines into one.
std::string NormalizeDiff(std::string_view diff);

// Keeps one patch per (bug_id, normalized diff) group: the one with the
// smallest patch_id. Descriptions of dropped patches are dropped with them.
Dataset DedupPatches(const Dataset& dataset);

std::string_view ToString(Label label);
std::string_view ToString(DescriptionSource source);
std::string ToString(const Origin& origin);

}  // namespace patchqa::corpus
