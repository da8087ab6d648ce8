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

#include "cli/synthetic.hpp"

#include <array>
#include <set>
#include <string>
#include <vector>

#include "patchqa/error.hpp"
#include "patchqa/random.hpp"

namespace patchqa::cli {

namespace {

constexpr std::array<const char*, 40> kFiller = {
    "the",     "when",    "value",   "method",  "returns", "wrong",
    "result",  "for",     "input",   "should",  "not",     "throw",
    "exception", "null",  "string",  "number",  "check",   "case",
    "handle",  "update",  "fix",     "issue",   "with",    "after",
    "before",  "call",    "list",    "map",     "error",   "empty",
    "index",   "bound",   "parse",   "format",  "missing", "default",
    "incorrect", "behaviour", "using", "code"};

class WordSource {
 public:
  explicit WordSource(Rng& rng) : rng_(rng) {}

  std::string Fresh() {
    for (;;) {
      std::string w;
      const int len = 5 + static_cast<int>(rng_.Below(4));
      for (int i = 0; i < len; ++i) {
        w.push_back(static_cast<char>('a' + rng_.Below(26)));
      }
      if (used_.insert(w).second) return w;
    }
  }

  std::string Filler() { return kFiller[rng_.Below(kFiller.size())]; }

  // `planted` interleaved with `fillers` filler words at random positions.
  std::string Sentence(const std::vector<std::string>& planted, int fillers,
                       bool lead) {
    std::vector<std::string> words;
    for (int i = 0; i < fillers; ++i) words.push_back(Filler());
    if (lead) {
      words.insert(words.begin(), planted.begin(), planted.end());
    } else {
      words.insert(words.end(), planted.begin(), planted.end());
      rng_.Shuffle(words);
    }
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out.push_back(' ');
      out += w;
    }
    return out;
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

std::string Capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string MakeDiff(const std::string& file, const std::vector<std::string>& words,
                     std::size_t line) {
  std::string joined;
  for (const auto& w : words) {
    if (!joined.empty()) joined += ", ";
    joined += w;
  }
  const std::string path = "src/main/java/org/example/" + file + ".java";
  const std::string l = std::to_string(line);
  return "--- a/" + path + "\n+++ b/" + path + "\n@@ -" + l + ",3 +" + l +
         ",3 @@\n   int total = 0;\n-  return compute(" + words.front() +
         ");\n+  return compute(" + joined + ");\n }\n";
}

}  // namespace

corpus::Dataset MakeSyntheticDataset(const SyntheticOptions& options) {
  if (options.bugs < 2) throw InvalidArgument("synthetic corpus needs >= 2 bugs");
  if (options.keywords < 1) throw InvalidArgument("keywords must be >= 1");

  Rng rng(Mix64(options.seed));
  WordSource words(rng);
  const bool lead = options.keywords_lead;
  corpus::Dataset d;

  for (int b = 0; b < options.bugs; ++b) {
    const std::string bug_id = "Synth-" + std::to_string(b + 1);
    std::vector<std::string> planted;
    for (int i = 0; i < options.keywords; ++i) planted.push_back(words.Fresh());
    const std::string file = Capitalize(words.Fresh());

    d.AddBug({bug_id, words.Sentence(planted, 3 + static_cast<int>(rng.Below(3)), lead),
              words.Sentence({},
                             options.body_min_words +
                                 static_cast<int>(rng.Below(
                                     static_cast<std::uint64_t>(options.body_spread) + 1)),
                             false)});

    const std::size_t line = 10 + rng.Below(400);
    const std::string dev_id = bug_id + "-dev";
    d.AddPatch({dev_id, bug_id, MakeDiff(file, planted, line),
                corpus::Origin::Developer(), corpus::Label::kCorrect});
    d.AddDescription({dev_id,
                      words.Sentence(planted, 2 + static_cast<int>(rng.Below(3)), lead),
                      corpus::DescriptionSource::kHumanCommitMessage});

    auto add_apr = [&](const std::string& id, const std::vector<std::string>& w,
                       corpus::Label label) {
      d.AddPatch({id, bug_id, MakeDiff(file, w, line + 1 + rng.Below(20)),
                  corpus::Origin::AprTool(rng.Below(2) ? "tbar" : "arja"), label});
      if (rng.Uniform() >= options.missing_description_rate) {
        d.AddDescription({id, words.Sentence(w, 2 + static_cast<int>(rng.Below(3)), lead),
                          corpus::DescriptionSource::kGenerated});
      }
    };
    if (rng.Uniform() < options.apr_correct_rate) {
      add_apr(bug_id + "-apr-c", planted, corpus::Label::kCorrect);
    }
    for (int i = 0; i < options.apr_incorrect_per_bug; ++i) {
      std::vector<std::string> foreign;
      for (int j = 0; j < options.keywords; ++j) foreign.push_back(words.Fresh());
      add_apr(bug_id + "-apr-i" + std::to_string(i), foreign,
              corpus::Label::kIncorrect);
    }
  }
  return d;
}

}  // namespace patchqa::cli
