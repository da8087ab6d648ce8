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

#include "patchqa/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <utility>

#include "json.hpp"
#include "patchqa/error.hpp"

namespace patchqa::corpus {

namespace {

using nlohmann::json;

bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

std::string RequireString(const json& record, const char* field,
                          std::size_t line) {
  const auto it = record.find(field);
  if (it == record.end()) {
    throw ParseError(std::string("missing field \"") + field + "\"", line);
  }
  if (!it->is_string()) {
    throw ParseError(std::string("field \"") + field + "\" must be a string",
                     line);
  }
  return it->get<std::string>();
}

Label ParseLabel(const std::string& s, std::size_t line) {
  if (s == "correct") return Label::kCorrect;
  if (s == "incorrect") return Label::kIncorrect;
  if (s == "unlabeled") return Label::kUnlabeled;
  throw ParseError("unknown label \"" + s + "\"", line);
}

Origin ParseOrigin(const std::string& s, std::size_t line) {
  if (s == "developer") return Origin::Developer();
  if (s.rfind("apr:", 0) == 0 && s.size() > 4) {
    return Origin::AprTool(s.substr(4));
  }
  throw ParseError("unknown origin \"" + s + "\"", line);
}

DescriptionSource ParseSource(const std::string& s, std::size_t line) {
  if (s == "human") return DescriptionSource::kHumanCommitMessage;
  if (s == "generated") return DescriptionSource::kGenerated;
  throw ParseError("unknown description source \"" + s + "\"", line);
}

template <typename T>
struct Numbered {
  T value;
  std::size_t line;
};

}  // namespace

std::string BugReport::Text() const { return title + "\n" + body; }

void Dataset::AddBug(BugReport bug) {
  if (bug.bug_id.empty()) throw InvalidArgument("bug_id must be non-empty");
  if (bugs_.contains(bug.bug_id)) {
    throw InvalidArgument("duplicate bug_id \"" + bug.bug_id + "\"");
  }
  auto key = bug.bug_id;
  bugs_.emplace(std::move(key), std::move(bug));
}

void Dataset::AddPatch(PatchRecord patch) {
  if (patch.patch_id.empty()) {
    throw InvalidArgument("patch_id must be non-empty");
  }
  if (patches_.contains(patch.patch_id)) {
    throw InvalidArgument("duplicate patch_id \"" + patch.patch_id + "\"");
  }
  if (!bugs_.contains(patch.bug_id)) {
    throw InvalidArgument("patch \"" + patch.patch_id +
                          "\" references unknown bug_id \"" + patch.bug_id +
                          "\"");
  }
  if (patch.diff.empty()) {
    throw InvalidArgument("patch \"" + patch.patch_id + "\" has an empty diff");
  }
  auto key = patch.patch_id;
  patches_.emplace(std::move(key), std::move(patch));
}

void Dataset::AddDescription(PatchDescription description) {
  if (!patches_.contains(description.patch_id)) {
    throw InvalidArgument("description references unknown patch_id \"" +
                          description.patch_id + "\"");
  }
  if (descriptions_.contains(description.patch_id)) {
    throw InvalidArgument("duplicate description for patch_id \"" +
                          description.patch_id + "\"");
  }
  if (IsBlank(description.text)) {
    throw InvalidArgument("description for patch_id \"" +
                          description.patch_id + "\" is empty");
  }
  auto key = description.patch_id;
  descriptions_.emplace(std::move(key), std::move(description));
}

const BugReport* Dataset::FindBug(std::string_view bug_id) const {
  const auto it = bugs_.find(std::string(bug_id));
  return it == bugs_.end() ? nullptr : &it->second;
}

const PatchDescription* Dataset::FindDescription(
    std::string_view patch_id) const {
  const auto it = descriptions_.find(std::string(patch_id));
  return it == descriptions_.end() ? nullptr : &it->second;
}

Dataset ReadDataset(std::istream& in) {
  std::vector<Numbered<BugReport>> bugs;
  std::vector<Numbered<PatchRecord>> patches;
  std::vector<Numbered<PatchDescription>> descriptions;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (IsBlank(text)) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line);
    }
    if (!record.is_object()) throw ParseError("record is not an object", line);
    const std::string kind = RequireString(record, "kind", line);
    if (kind == "bug") {
      bugs.push_back({{RequireString(record, "bug_id", line),
                       RequireString(record, "title", line),
                       record.contains("body")
                           ? RequireString(record, "body", line)
                           : std::string()},
                      line});
    } else if (kind == "patch") {
      patches.push_back(
          {{RequireString(record, "patch_id", line),
            RequireString(record, "bug_id", line),
            RequireString(record, "diff", line),
            ParseOrigin(RequireString(record, "origin", line), line),
            ParseLabel(RequireString(record, "label", line), line)},
           line});
    } else if (kind == "description") {
      descriptions.push_back(
          {{RequireString(record, "patch_id", line),
            RequireString(record, "text", line),
            ParseSource(RequireString(record, "source", line), line)},
           line});
    } else {
      throw ParseError("unknown record kind \"" + kind + "\"", line);
    }
  }

  Dataset dataset;
  auto add = [](auto&& inserter, auto& items) {
    for (auto& item : items) {
      try {
        inserter(std::move(item.value));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), item.line);
      }
    }
  };
  add([&](BugReport b) { dataset.AddBug(std::move(b)); }, bugs);
  add([&](PatchRecord p) { dataset.AddPatch(std::move(p)); }, patches);
  add([&](PatchDescription d) { dataset.AddDescription(std::move(d)); },
      descriptions);
  return dataset;
}

Dataset LoadDataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file " + path.string());
  return ReadDataset(in);
}

void WriteDataset(const Dataset& dataset, std::ostream& out) {
  for (const auto& [id, bug] : dataset.bugs()) {
    out << json{{"kind", "bug"},
                {"bug_id", bug.bug_id},
                {"title", bug.title},
                {"body", bug.body}}
               .dump()
        << '\n';
  }
  for (const auto& [id, patch] : dataset.patches()) {
    out << json{{"kind", "patch"},
                {"patch_id", patch.patch_id},
                {"bug_id", patch.bug_id},
                {"diff", patch.diff},
                {"origin", ToString(patch.origin)},
                {"label", ToString(patch.label)}}
               .dump()
        << '\n';
  }
  for (const auto& [id, d] : dataset.descriptions()) {
    out << json{{"kind", "description"},
                {"patch_id", d.patch_id},
                {"text", d.text},
                {"source", ToString(d.source)}}
               .dump()
        << '\n';
  }
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset file " + path.string());
  WriteDataset(dataset, out);
}

std::string NormalizeDiff(std::string_view diff) {
  std::string out;
  out.reserve(diff.size());
  bool previous_blank = false;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= diff.size()) {
    std::size_t end = diff.find('\n', pos);
    if (end == std::string_view::npos) end = diff.size();
    std::string_view line = diff.substr(pos, end - pos);
    const auto last = line.find_last_not_of(" \t\r\f\v");
    line = last == std::string_view::npos ? std::string_view()
                                          : line.substr(0, last + 1);
    const bool blank = line.empty();
    if (!(blank && previous_blank)) {
      if (!first) out.push_back('\n');
      out.append(line);
      first = false;
    }
    previous_blank = blank;
    pos = end + 1;
  }
  return out;
}

Dataset DedupPatches(const Dataset& dataset) {
  Dataset out;
  for (const auto& [id, bug] : dataset.bugs()) out.AddBug(bug);
  // patches() iterates in patch_id order, so the first seen survives.
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [id, patch] : dataset.patches()) {
    if (!seen.emplace(patch.bug_id, NormalizeDiff(patch.diff)).second) {
      continue;
    }
    out.AddPatch(patch);
    if (const auto* d = dataset.FindDescription(id)) out.AddDescription(*d);
  }
  return out;
}

std::string_view ToString(Label label) {
  switch (label) {
    case Label::kCorrect:
      return "correct";
    case Label::kIncorrect:
      return "incorrect";
    case Label::kUnlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

std::string_view ToString(DescriptionSource source) {
  return source == DescriptionSource::kGenerated ? "generated" : "human";
}

std::string ToString(const Origin& origin) {
  return origin.developer ? "developer" : "apr:" + origin.tool;
}

}  // namespace patchqa::corpus
