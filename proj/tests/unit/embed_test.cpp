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

#include "patchqa/embed.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "patchqa/error.hpp"
#include "patchqa/random.hpp"

namespace patchqa::embed {
namespace {

// Reference split: lowercase, then take maximal runs of [a-z0-9_#.].
std::vector<std::string> ReferenceTokens(std::string text) {
  for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  static const std::regex word("[a-z0-9_#.]+");
  std::vector<std::string> out;
  for (std::sregex_iterator it(text.begin(), text.end(), word), end; it != end; ++it) {
    out.push_back(it->str());
  }
  return out;
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(Tokenize("NumberUtils#createNumber - bad behaviour").tokens,
            (std::vector<std::string>{"numberutils#createnumber", "bad", "behaviour"}));
  EXPECT_TRUE(Tokenize("").tokens.empty());
  EXPECT_EQ(Tokenize("a  a").tokens, (std::vector<std::string>{"a", "a"}));
  EXPECT_EQ(Tokenize("Foo.bar(x_1, \"--\")").tokens,
            (std::vector<std::string>{"foo.bar", "x_1"}));
}

TEST(Tokenize, MatchesReferenceSplitOnRandomText) {
  const std::string alphabet = "aZ9_#. -(\"\t\n,;/\\Q.x";
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const auto n = rng.Below(40);
    for (std::uint64_t i = 0; i < n; ++i) text.push_back(alphabet[rng.Below(alphabet.size())]);
    EXPECT_EQ(Tokenize(text).tokens, ReferenceTokens(text)) << text;
  }
}

TEST(DistinctWordCount, Examples) {
  EXPECT_EQ(DistinctWordCount("a b a"), 2u);
  EXPECT_EQ(DistinctWordCount(""), 0u);
  const std::string title = "NumberUtils#createNumber - bad behaviour for leading \"--\".";
  const auto ref = ReferenceTokens(title);
  EXPECT_EQ(DistinctWordCount(title), std::set<std::string>(ref.begin(), ref.end()).size());
  EXPECT_EQ(DistinctWordCount(title), 6u);
}

TEST(HashSeededEmbedding, DeterministicAndSeedDependent) {
  const HashSeededEmbedding a(8, 7), b(8, 7), c(8, 8);
  EXPECT_EQ(a.Lookup("x"), a.Lookup("x"));
  EXPECT_EQ(a.Lookup("x"), b.Lookup("x"));
  EXPECT_NE(a.Lookup("x"), c.Lookup("x"));
  EXPECT_NE(a.Lookup("x"), a.Lookup("y"));
  EXPECT_THROW(HashSeededEmbedding(0, 1), InvalidArgument);
}

TEST(HashSeededEmbedding, ComponentsHaveUnitVariance) {
  const HashSeededEmbedding e(16, 1);
  double sum = 0, sq = 0;
  int n = 0;
  for (int t = 0; t < 2000; ++t) {
    for (double v : e.Lookup("tok" + std::to_string(t))) {
      ASSERT_TRUE(std::isfinite(v));
      sum += v;
      sq += v * v;
      ++n;
    }
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.03);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.05);
}

TEST(Prepare, PadsShortSequences) {
  const HashSeededEmbedding e(5, 2);
  const auto m = PrepareText("one two three", e, 64);
  EXPECT_EQ(m.rows.rows(), 64u);
  EXPECT_EQ(m.rows.cols(), 5u);
  EXPECT_EQ(m.length, 3u);
  EXPECT_FALSE(m.truncated);
  int mask_sum = 0, nonzero_rows = 0;
  for (std::size_t r = 0; r < 64; ++r) {
    mask_sum += m.mask[r];
    bool nonzero = false;
    for (double v : m.rows.row(r)) nonzero |= v != 0.0;
    nonzero_rows += nonzero;
    if (!m.mask[r]) EXPECT_FALSE(nonzero) << r;
  }
  EXPECT_EQ(mask_sum, 3);
  EXPECT_EQ(nonzero_rows, 3);
  const auto two = e.Lookup("two");
  for (int c = 0; c < 5; ++c) EXPECT_EQ(m.rows(1, c), two[c]);
}

TEST(Prepare, TruncatesLongSequences) {
  const HashSeededEmbedding e(3, 2);
  TokenSequence seq;
  for (int i = 0; i < 100; ++i) seq.tokens.push_back("t" + std::to_string(i));
  const auto m = Prepare(seq, e, 64);
  EXPECT_TRUE(m.truncated);
  EXPECT_EQ(m.length, 64u);
  int mask_sum = 0;
  for (auto b : m.mask) mask_sum += b;
  EXPECT_EQ(mask_sum, 64);
  const auto last = e.Lookup("t63");
  for (int c = 0; c < 3; ++c) EXPECT_EQ(m.rows(63, c), last[c]);
}

TEST(Prepare, ShapeAndMaskSumProperty) {
  const HashSeededEmbedding e(4, 9);
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    TokenSequence seq;
    const auto n = rng.Below(30);
    for (std::uint64_t i = 0; i < n; ++i) seq.tokens.push_back("w" + std::to_string(rng.Below(10)));
    const std::size_t max_len = 1 + rng.Below(20);
    const auto m = Prepare(seq, e, max_len);
    EXPECT_EQ(m.rows.rows(), max_len);
    EXPECT_EQ(m.rows.cols(), 4u);
    EXPECT_EQ(m.length, std::min<std::size_t>(n, max_len));
    EXPECT_EQ(m.truncated, n > max_len);
  }
}

TEST(Prepare, RejectsZeroLength) {
  const HashSeededEmbedding e(4, 9);
  EXPECT_THROW(PrepareText("a", e, 0), InvalidArgument);
}

TEST(SentenceVector, MeanOfTokenVectors) {
  const HashSeededEmbedding e(3, 5);
  const auto v = SentenceVector("a b a", e);
  const auto a = e.Lookup("a"), b = e.Lookup("b");
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(v[c], (2 * a[c] + b[c]) / 3, 1e-15);
  EXPECT_EQ(SentenceVector("  ", e), std::vector<double>(3, 0.0));
}

TEST(Standardize, Examples) {
  EXPECT_EQ(Standardize({{1, 2}, {3, 4}}),
            (std::vector<std::vector<double>>{{-1, -1}, {1, 1}}));
  EXPECT_EQ(Standardize({{5, 5}, {5, 5}, {5, 5}}),
            (std::vector<std::vector<double>>(3, {0, 0})));
  EXPECT_THROW(Standardize({{1, 2}}), InvalidArgument);
  EXPECT_THROW(Standardize({{1, 2}, {1}}), InvalidArgument);
}

TEST(Standardize, ZeroMeanUnitVarianceAndIdempotent) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 2 + rng.Below(20);
    const auto d = 1 + rng.Below(6);
    std::vector<std::vector<double>> v(n, std::vector<double>(d));
    for (auto& row : v) {
      for (auto& x : row) x = rng.Uniform(-50, 50);
    }
    const auto z = Standardize(v);
    for (std::size_t c = 0; c < d; ++c) {
      double sum = 0, sq = 0;
      for (const auto& row : z) {
        sum += row[c];
        sq += row[c] * row[c];
      }
      EXPECT_NEAR(sum / n, 0.0, 1e-9);
      EXPECT_NEAR(sq / n, 1.0, 1e-9);
    }
    const auto zz = Standardize(z);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) EXPECT_NEAR(zz[r][c], z[r][c], 1e-9);
    }
  }
}

TEST(FileBackedEmbedding, ReadsTableAndFallsBack) {
  std::istringstream in("dim 2\nfoo 1.5 -2\nbar 0 3e-1\n");
  const auto e = FileBackedEmbedding::Read(in, 7);
  EXPECT_EQ(e.dim(), 2);
  EXPECT_EQ(e.vocabulary_size(), 2u);
  EXPECT_EQ(e.Lookup("foo"), (std::vector<double>{1.5, -2}));
  EXPECT_EQ(e.Lookup("bar"), (std::vector<double>{0, 0.3}));
  EXPECT_FALSE(e.Contains("baz"));
  EXPECT_EQ(e.Lookup("baz"), HashSeededEmbedding(2, 7).Lookup("baz"));
}

TEST(FileBackedEmbedding, ParseErrorsCarryLineNumbers) {
  struct Case {
    std::string text;
    std::size_t line;
  };
  for (const auto& c : std::vector<Case>{
           {"", 1},
           {"dims 2\n", 1},
           {"dim 0\n", 1},
           {"dim 2\nfoo 1\n", 2},
           {"dim 2\nfoo 1 2 3\n", 2},
           {"dim 2\nfoo 1 2\nfoo 3 4\n", 3},
           {"dim 2\nfoo 1 x\n", 2},
           {"dim 2\nfoo 1 nan\n", 2},
       }) {
    std::istringstream in(c.text);
    try {
      FileBackedEmbedding::Read(in, 1);
      ADD_FAILURE() << "no error for: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text << " -> " << e.what();
    }
  }
}

}  // namespace
}  // namespace patchqa::embed
