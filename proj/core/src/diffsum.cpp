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

#include "patchqa/diffsum.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "patchqa/error.hpp"

namespace patchqa::diffsum {

namespace {

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Path from a `---`/`+++` header: drops the marker, any tab-separated
// timestamp and a leading a/ or b/.
std::string HeaderPath(std::string_view line) {
  line.remove_prefix(4);
  if (const auto tab = line.find('\t'); tab != std::string_view::npos) {
    line = line.substr(0, tab);
  }
  while (!line.empty() && line.back() == ' ') line.remove_suffix(1);
  if (StartsWith(line, "a/") || StartsWith(line, "b/")) line.remove_prefix(2);
  return std::string(line);
}

std::size_t ParseNumber(std::string_view& s, std::size_t line_no) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr == s.data()) {
    throw ParseError("malformed hunk header", line_no);
  }
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return value;
}

// Parses "<start>[,<count>]".
void ParseRange(std::string_view& s, std::size_t& start, std::size_t& count,
                std::size_t line_no) {
  start = ParseNumber(s, line_no);
  count = 1;
  if (!s.empty() && s.front() == ',') {
    s.remove_prefix(1);
    count = ParseNumber(s, line_no);
  }
}

struct HunkHeader {
  std::size_t old_start, old_count, new_start, new_count;
};

HunkHeader ParseHunkHeader(std::string_view line, std::size_t line_no) {
  HunkHeader h{};
  std::string_view s = line;
  if (!StartsWith(s, "@@ -")) throw ParseError("malformed hunk header", line_no);
  s.remove_prefix(4);
  ParseRange(s, h.old_start, h.old_count, line_no);
  if (!StartsWith(s, " +")) throw ParseError("malformed hunk header", line_no);
  s.remove_prefix(2);
  ParseRange(s, h.new_start, h.new_count, line_no);
  if (!StartsWith(s, " @@")) throw ParseError("malformed hunk header", line_no);
  return h;
}

std::string Snippet(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string token, out;
  for (std::size_t n = 0; n < kSnippetTokens && in >> token; ++n) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::string Plural(std::size_t n) {
  return std::to_string(n) + (n == 1 ? " line" : " lines");
}

struct FileChanges {
  std::size_t removed = 0;
  std::size_t added = 0;
  std::string removed_snippet;
  std::string added_snippet;
};

void TakeSnippet(std::string& slot, const std::vector<std::string>& lines) {
  if (!slot.empty()) return;
  for (const auto& l : lines) {
    std::string s = Snippet(l);
    if (!s.empty()) {
      slot = std::move(s);
      return;
    }
  }
}

}  // namespace

std::vector<DiffHunk> ParseUnifiedDiff(std::string_view diff) {
  const auto lines = SplitLines(diff);
  std::vector<DiffHunk> hunks;
  std::string old_path, new_path;

  std::size_t i = 0;
  while (i < lines.size()) {
    const std::string_view line = lines[i];
    if (StartsWith(line, "--- ")) {
      old_path = HeaderPath(line);
      ++i;
      continue;
    }
    if (StartsWith(line, "+++ ")) {
      new_path = HeaderPath(line);
      ++i;
      continue;
    }
    if (!StartsWith(line, "@@")) {
      ++i;
      continue;
    }

    const std::size_t header_line = i + 1;
    const HunkHeader h = ParseHunkHeader(line, header_line);
    DiffHunk hunk;
    hunk.file_path = new_path == "/dev/null" ? old_path : new_path;
    hunk.old_start = h.old_start == 0 ? 1 : h.old_start;
    hunk.new_start = h.new_start == 0 ? 1 : h.new_start;

    std::size_t old_seen = 0, new_seen = 0;
    ++i;
    while (i < lines.size() && (old_seen < h.old_count || new_seen < h.new_count)) {
      const std::string_view body = lines[i];
      if (body.empty() || body.front() == ' ') {
        hunk.context_lines.emplace_back(body.empty() ? body : body.substr(1));
        ++old_seen;
        ++new_seen;
      } else if (body.front() == '-') {
        hunk.removed_lines.emplace_back(body.substr(1));
        ++old_seen;
      } else if (body.front() == '+') {
        hunk.added_lines.emplace_back(body.substr(1));
        ++new_seen;
      } else if (body.front() != '\\') {
        break;
      }
      ++i;
    }
    // "\ No newline at end of file" may trail the last line.
    while (i < lines.size() && StartsWith(lines[i], "\\")) ++i;

    if (old_seen != h.old_count || new_seen != h.new_count) {
      throw ParseError("hunk line counts inconsistent with header", header_line);
    }
    if (i < lines.size() && !lines[i].empty() &&
        (lines[i].front() == '+' || lines[i].front() == '-') &&
        !StartsWith(lines[i], "--- ") && !StartsWith(lines[i], "+++ ")) {
      throw ParseError("hunk line counts inconsistent with header", header_line);
    }
    if (hunk.added_lines.empty() && hunk.removed_lines.empty()) {
      throw ParseError("hunk contains no added or removed line", header_line);
    }
    hunks.push_back(std::move(hunk));
  }
  return hunks;
}

std::string FileStem(std::string_view path) {
  if (const auto slash = path.find_last_of("/\\");
      slash != std::string_view::npos) {
    path.remove_prefix(slash + 1);
  }
  if (const auto dot = path.rfind('.'); dot != std::string_view::npos && dot > 0) {
    path = path.substr(0, dot);
  }
  return std::string(path);
}

std::string Summarize(const std::vector<DiffHunk>& hunks) {
  if (hunks.empty()) throw InvalidArgument("cannot summarize an empty diff");

  std::vector<std::string> order;
  std::map<std::string, FileChanges> files;
  for (const auto& hunk : hunks) {
    auto [it, inserted] = files.try_emplace(hunk.file_path);
    if (inserted) order.push_back(hunk.file_path);
    FileChanges& fc = it->second;
    fc.removed += hunk.removed_lines.size();
    fc.added += hunk.added_lines.size();
    TakeSnippet(fc.removed_snippet, hunk.removed_lines);
    TakeSnippet(fc.added_snippet, hunk.added_lines);
  }

  std::string out;
  for (const auto& path : order) {
    const FileChanges& fc = files.at(path);
    std::string clause;
    auto part = [&clause](std::string_view verb, std::size_t n,
                          const std::string& snippet) {
      if (n == 0) return;
      if (!clause.empty()) clause.push_back(' ');
      clause.append(verb).append(" ").append(Plural(n));
      if (!snippet.empty()) clause.append(" `").append(snippet).append("`");
    };
    part("removed", fc.removed, fc.removed_snippet);
    part("added", fc.added, fc.added_snippet);
    const std::string stem = FileStem(path);
    if (!stem.empty()) clause.append(" in ").append(stem);
    if (!out.empty()) out.append("; ");
    out.append(clause);
  }
  return out;
}

}  // namespace patchqa::diffsum
