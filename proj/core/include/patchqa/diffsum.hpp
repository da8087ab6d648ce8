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
#include <string>
#include <string_view>
#include <vector>

namespace patchqa::diffsum {

struct DiffHunk {
  std::string file_path;
  std::size_t old_start = 1;  // 1-based
  std::size_t new_start = 1;  // 1-based
  std::vector<std::string> removed_lines;
  std::vector<std::string> added_lines;
  std::vector<std::string> context_lines;

  friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

// Parses unified diff text into hunks, in file order. Lines outside hunks
// (`diff --git`, `index`, ...) are ignored. The file path comes from the
// `+++` header with any `b/` prefix stripped (the `---` path for deletions).
//
// Throws ParseError on a malformed `@@` header, a hunk whose body disagrees
// with its header line counts, or a hunk without any change.
std::vector<DiffHunk> ParseUnifiedDiff(std::string_view diff);

// Maximum number of whitespace-separated tokens kept in a snippet.
inline constexpr std::size_t kSnippetTokens = 12;

// Deterministic one-line description of a change, one clause per file:
//
//   removed 1 line `if (x == null) {` added 2 lines `...` in Foo
//
// clauses joined by "; ". Template words are lowercase; snippets and file
// stems keep their original spelling. Throws InvalidArgument when `hunks` is
// empty.
std::string Summarize(const std::vector<DiffHunk>& hunks);

// Filename without directories or extension.
std::string FileStem(std::string_view path);

}  // namespace patchqa::diffsum
