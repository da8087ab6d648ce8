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

#include <gtest/gtest.h>

#include <sstream>

#include "patchqa/error.hpp"
#include "patchqa/random.hpp"

namespace patchqa::corpus {
namespace {

constexpr char kLang7[] =
    R"({"kind":"bug","bug_id":"Lang-7","title":"NumberUtils#createNumber - bad behaviour for leading \"--\".","body":"createNumber accepts --1.1E-700F."})"
    "\n"
    R"({"kind":"patch","patch_id":"Lang-7-dev","bug_id":"Lang-7","diff":"--- a/NumberUtils.java\n+++ b/NumberUtils.java\n@@ -1,1 +1,1 @@\n-if (str.startsWith(\"--\")) {\n+if (str.startsWith(\"-\")) {\n","origin":"developer","label":"correct"})"
    "\n";

Dataset Parse(const std::string& text) {
  std::istringstream in(text);
  return ReadDataset(in);
}

TEST(ReadDataset, CaseStudyBugAndPatch) {
  const auto d = Parse(kLang7);
  ASSERT_EQ(d.bugs().size(), 1u);
  ASSERT_EQ(d.patches().size(), 1u);
  const auto& bug = d.bugs().at("Lang-7");
  EXPECT_EQ(bug.title,
            "NumberUtils#createNumber - bad behaviour for leading \"--\".");
  EXPECT_EQ(bug.Text(), bug.title + "\n" + bug.body);
  const auto& patch = d.patches().at("Lang-7-dev");
  EXPECT_TRUE(patch.origin.developer);
  EXPECT_EQ(patch.label, Label::kCorrect);
}

TEST(ReadDataset, EmptyInputGivesEmptyDataset) {
  EXPECT_TRUE(Parse("").empty());
  EXPECT_TRUE(Parse("\n  \n").empty());
}

TEST(ReadDataset, DanglingBugReferenceNamesTheId) {
  const std::string text =
      R"({"kind":"patch","patch_id":"p1","bug_id":"X-99","diff":"x","origin":"developer","label":"correct"})";
  try {
    Parse(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("X-99"), std::string::npos);
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(ReadDataset, RecordsMayAppearInAnyOrder) {
  const std::string text =
      R"({"kind":"description","patch_id":"p1","text":"fix it","source":"human"})"
      "\n"
      R"({"kind":"patch","patch_id":"p1","bug_id":"B","diff":"d","origin":"apr:TBar","label":"incorrect"})"
      "\n"
      R"({"kind":"bug","bug_id":"B","title":"t"})";
  const auto d = Parse(text);
  EXPECT_EQ(d.patches().at("p1").origin, Origin::AprTool("TBar"));
  EXPECT_EQ(d.bugs().at("B").body, "");
  EXPECT_EQ(d.FindDescription("p1")->source, DescriptionSource::kHumanCommitMessage);
}

TEST(ReadDataset, ErrorsReportLineNumbers) {
  struct Case {
    std::string text;
    std::size_t line;
  };
  const std::string bug = R"({"kind":"bug","bug_id":"B","title":"t","body":""})";
  const std::string patch =
      R"({"kind":"patch","patch_id":"p","bug_id":"B","diff":"d","origin":"developer","label":"correct"})";
  const std::vector<Case> cases = {
      {bug + "\n{not json", 2},
      {bug + "\n" + bug, 2},                                       // duplicate bug
      {bug + "\n" + patch + "\n" + patch, 3},                      // duplicate patch
      {R"({"kind":"comment","text":"x"})", 1},                     // unknown kind
      {R"({"kind":"bug","title":"t"})", 1},                        // missing bug_id
      {bug + "\n" + R"({"kind":"patch","patch_id":"p","bug_id":"B","diff":"d","origin":"developer","label":"maybe"})", 2},
      {bug + "\n" + R"({"kind":"patch","patch_id":"p","bug_id":"B","diff":"d","origin":"robot","label":"correct"})", 2},
      {bug + "\n" + R"({"kind":"patch","patch_id":"p","bug_id":"B","diff":"","origin":"developer","label":"correct"})", 2},
      {bug + "\n" + patch + "\n" + R"({"kind":"description","patch_id":"p","text":"  ","source":"human"})", 3},
      {bug + "\n" + patch + "\n" + R"({"kind":"description","patch_id":"q","text":"x","source":"human"})", 3},
      {bug + "\n" + patch + "\n" + R"({"kind":"description","patch_id":"p","text":"x","source":"llm"})", 3},
      {"[1,2]", 1},
  };
  for (const auto& c : cases) {
    try {
      Parse(c.text);
      ADD_FAILURE() << "no error for: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text << " -> " << e.what();
    }
  }
}

TEST(Dataset, AddRejectsIntegrityViolations) {
  Dataset d;
  EXPECT_THROW(d.AddBug({"", "t", ""}), InvalidArgument);
  d.AddBug({"B", "t", ""});
  EXPECT_THROW(d.AddPatch({"p", "nope", "diff", Origin::Developer(), Label::kCorrect}),
               InvalidArgument);
  EXPECT_THROW(d.AddDescription({"p", "x", DescriptionSource::kGenerated}),
               InvalidArgument);
}

TEST(NormalizeDiff, StripsTrailingWhitespaceAndCollapsesBlankRuns) {
  EXPECT_EQ(NormalizeDiff("a  \n\n\n\nb\t\n"), "a\n\nb\n");
  EXPECT_EQ(NormalizeDiff("a\r\nb"), "a\nb");
  EXPECT_EQ(NormalizeDiff(""), "");
}

Dataset TwoPatches(const std::string& diff_a, const std::string& diff_b,
                   const std::string& bug_b = "B") {
  Dataset d;
  d.AddBug({"B", "t", ""});
  d.AddBug({"C", "t", ""});
  d.AddPatch({"p1", "B", diff_a, Origin::AprTool("x"), Label::kIncorrect});
  d.AddPatch({"p2", bug_b, diff_b, Origin::AprTool("y"), Label::kIncorrect});
  d.AddDescription({"p2", "desc", DescriptionSource::kGenerated});
  return d;
}

TEST(DedupPatches, IdenticalDiffsCollapse) {
  const auto d = DedupPatches(TwoPatches("-a\n+b\n", "-a\n+b\n"));
  ASSERT_EQ(d.patches().size(), 1u);
  EXPECT_TRUE(d.patches().contains("p1"));
  EXPECT_TRUE(d.descriptions().empty());  // p2's description goes with it
}

TEST(DedupPatches, TrailingWhitespaceDifferenceCollapses) {
  const std::string a = "-if (x == null)\n+return;\n";
  const std::string b = "-if (x == null)   \n+return;\t\n";
  // Oracle: the two normalized strings are byte-equal.
  ASSERT_EQ(NormalizeDiff(a), NormalizeDiff(b));
  ASSERT_NE(a, b);
  EXPECT_EQ(DedupPatches(TwoPatches(a, b)).patches().size(), 1u);
}

TEST(DedupPatches, ExtraParenthesesAreNotCaught) {
  const auto d =
      DedupPatches(TwoPatches("+if (x == null)\n", "+if ((x) == null)\n"));
  EXPECT_EQ(d.patches().size(), 2u);
}

TEST(DedupPatches, ScopedToOneBug) {
  const auto d = DedupPatches(TwoPatches("-a\n+b\n", "-a\n+b\n", "C"));
  EXPECT_EQ(d.patches().size(), 2u);
}

std::string RandomDiff(Rng& rng) {
  static const char* lines[] = {"-a", "+b", "", " ctx", "+b  ", "-a\t"};
  std::string out;
  const auto n = 1 + rng.Below(4);
  for (std::uint64_t i = 0; i < n; ++i) {
    out += lines[rng.Below(6)];
    out += '\n';
  }
  return out;
}

Dataset RandomDataset(Rng& rng) {
  Dataset d;
  const auto bugs = 1 + rng.Below(4);
  for (std::uint64_t b = 0; b < bugs; ++b) {
    d.AddBug({"B" + std::to_string(b), "title " + std::to_string(b), "body"});
  }
  const auto patches = rng.Below(12);
  for (std::uint64_t p = 0; p < patches; ++p) {
    const std::string id = "p" + std::to_string(p);
    d.AddPatch({id, "B" + std::to_string(rng.Below(bugs)), RandomDiff(rng),
                rng.Below(2) ? Origin::Developer() : Origin::AprTool("t"),
                static_cast<Label>(rng.Below(3))});
    if (rng.Below(2)) {
      d.AddDescription({id, "describe " + id,
                        rng.Below(2) ? DescriptionSource::kGenerated
                                     : DescriptionSource::kHumanCommitMessage});
    }
  }
  return d;
}

TEST(DedupPatches, PropertiesOnRandomDatasets) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = RandomDataset(rng);
    const auto once = DedupPatches(d);
    EXPECT_EQ(DedupPatches(once), once);  // idempotent
    std::set<std::pair<std::string, std::string>> groups, all_groups;
    for (const auto& [id, p] : once.patches()) {
      groups.emplace(p.bug_id, NormalizeDiff(p.diff));
    }
    for (const auto& [id, p] : d.patches()) {
      all_groups.emplace(p.bug_id, NormalizeDiff(p.diff));
    }
    EXPECT_EQ(groups.size(), once.patches().size());
    EXPECT_EQ(groups, all_groups);  // every group keeps a representative
  }
}

TEST(WriteDataset, LoadSerializeLoadIsIdentity) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = RandomDataset(rng);
    std::ostringstream out;
    WriteDataset(d, out);
    EXPECT_EQ(Parse(out.str()), d);
  }
  const auto lang7 = Parse(kLang7);
  std::ostringstream out;
  WriteDataset(lang7, out);
  EXPECT_EQ(Parse(out.str()), lang7);
}

}  // namespace
}  // namespace patchqa::corpus
