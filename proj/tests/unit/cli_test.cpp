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

#include "cli/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cli/pipeline.hpp"
#include "cli/synthetic.hpp"
#include "json.hpp"
#include "patchqa/pairing.hpp"
#include "test_util.hpp"

namespace patchqa::cli {
namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "patchqa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

fs::path Synthetic(const fs::path& dir, int bugs) {
  const auto path = dir / "synth.jsonl";
  SyntheticOptions o;
  o.bugs = bugs;
  corpus::SaveDataset(MakeSyntheticDataset(o), path);
  return path;
}

// Small model so that each run takes well under a second.
std::vector<std::string> FastModel() {
  return {"--epochs", "2", "--hidden", "3", "--max-len", "12", "--hash-dim", "6"};
}

constexpr char kThreeRecords[] =
    R"({"kind":"bug","bug_id":"Lang-7","title":"NumberUtils#createNumber - bad behaviour","body":"leading --"})"
    "\n"
    R"({"kind":"patch","patch_id":"p1","bug_id":"Lang-7","diff":"--- a/N.java\n+++ b/N.java\n@@ -1 +1 @@\n-a\n+b\n","origin":"developer","label":"correct"})"
    "\n"
    R"({"kind":"description","patch_id":"p1","text":"Fix leading minus","source":"human"})"
    "\n";

TEST(Ingest, SummarizesValidFile) {
  const auto dir = testing::ScratchDir("cli_ingest");
  Spit(dir / "d.jsonl", kThreeRecords);
  const auto r = Invoke({"ingest", "--dataset", (dir / "d.jsonl").string(), "--out",
                         (dir / "summary.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["bugs"], 1);
  EXPECT_EQ(j["patches"], 1);
  EXPECT_EQ(j["descriptions"], 1);
  EXPECT_EQ(j["duplicates_removed"], 0);
  EXPECT_EQ(j["patches_by_label"]["correct"], 1);
  EXPECT_EQ(Slurp(dir / "summary.json"), r.out);
}

TEST(Ingest, DanglingReferenceFailsNamingTheId) {
  const auto dir = testing::ScratchDir("cli_dangling");
  Spit(dir / "d.jsonl",
       R"({"kind":"patch","patch_id":"p","bug_id":"X-99","diff":"d","origin":"developer","label":"correct"})");
  const auto r = Invoke({"ingest", "--dataset", (dir / "d.jsonl").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("X-99"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("ingest"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
}

TEST(Ingest, MissingFileFails) {
  const auto r = Invoke({"ingest", "--dataset", "/nonexistent/d.jsonl"});
  EXPECT_NE(r.code, 0);
}

TEST(Crossval, ThirtyBugsTestedOnceEachAndDeterministic) {
  const auto dir = testing::ScratchDir("cli_crossval");
  const auto data = Synthetic(dir, 30);
  auto args = FastModel();
  for (const char* run : {"a", "b"}) {
    auto a = args;
    a.insert(a.begin(), {"crossval", "--dataset", data.string(), "--out", (dir / run).string()});
    const auto r = Invoke(a);
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"report.json", "scores.csv", "foldplan.json"}) {
    EXPECT_EQ(Slurp(dir / "a" / f), Slurp(dir / "b" / f)) << f;
  }
  for (int i = 0; i < 10; ++i) {
    EXPECT_TRUE(fs::exists(dir / "a" / ("model_fold" + std::to_string(i) + ".ckpt")));
  }

  const auto plan = pairing::FoldPlanFromJson(Slurp(dir / "a" / "foldplan.json"));
  EXPECT_EQ(plan.k, 10);
  EXPECT_EQ(plan.assignments.size(), 30u);
  const auto report = Json::parse(Slurp(dir / "a" / "report.json"));
  ASSERT_EQ(report["per_fold"].size(), 10u);
  std::size_t tested_bugs = 0, tested_examples = 0;
  for (const auto& f : report["per_fold"]) {
    tested_bugs += f["test_bugs"].get<std::size_t>();
    tested_examples += f["test_examples"].get<std::size_t>();
  }
  EXPECT_EQ(tested_bugs, 30u);
  EXPECT_EQ(tested_examples, report["counts"]["examples"].get<std::size_t>());
  for (const char* seed : {"model", "fold", "pairing", "hash"}) {
    EXPECT_TRUE(report["config"]["seeds"].contains(seed)) << seed;
  }

  // One CSV row per example, each bug's rows in the fold its group maps to.
  std::istringstream csv(Slurp(dir / "a" / "scores.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "patch_id,bug_id,label,score");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, tested_examples);
}

TEST(Crossval, MoreGroupsThanBugsFails) {
  const auto dir = testing::ScratchDir("cli_k");
  const auto data = Synthetic(dir, 5);
  auto args = FastModel();
  args.insert(args.begin(), {"crossval", "--dataset", data.string(), "--k", "10", "--out",
                             (dir / "o").string()});
  const auto r = Invoke(args);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("folds"), std::string::npos) << r.err;
}

TEST(Crossval, ThreadsDoNotChangeResults) {
  const auto dir = testing::ScratchDir("cli_threads");
  const auto data = Synthetic(dir, 12);
  for (const char* t : {"1", "3"}) {
    auto a = FastModel();
    a.insert(a.begin(), {"crossval", "--dataset", data.string(), "--k", "4", "--threads", t,
                         "--out", (dir / t).string()});
    ASSERT_EQ(Invoke(a).code, 0);
  }
  EXPECT_EQ(Slurp(dir / "1" / "report.json"), Slurp(dir / "3" / "report.json"));
  EXPECT_EQ(Slurp(dir / "1" / "scores.csv"), Slurp(dir / "3" / "scores.csv"));
}

TEST(TrainPredict, VerdictsFollowThreshold) {
  const auto dir = testing::ScratchDir("cli_predict");
  const auto data = Synthetic(dir, 10);
  auto train = FastModel();
  train.insert(train.begin(), {"train", "--dataset", data.string(), "--out", dir.string()});
  ASSERT_EQ(Invoke(train).code, 0);
  const auto model = (dir / "model.ckpt").string();

  auto predict = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = {"predict", "--model", model, "--bug-text",
                                  "parser crashes on leading minus"};
    a.insert(a.end(), extra.begin(), extra.end());
    return Invoke(a);
  };
  const auto first = predict({"--description", "handle leading minus"});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, predict({"--description", "handle leading minus"}).out);
  const double score = std::stod(first.out.substr(first.out.find(' ') + 1));
  EXPECT_GE(score, 0.26894);
  EXPECT_LE(score, 0.73106);

  const auto strict = predict({"--description", "handle leading minus", "--threshold", "0.9"});
  EXPECT_NE(strict.out.find("verdict incorrect"), std::string::npos) << strict.out;
  const auto lax = predict({"--description", "handle leading minus", "--threshold", "0.2"});
  EXPECT_NE(lax.out.find("verdict correct"), std::string::npos) << lax.out;

  const auto from_diff =
      predict({"--diff", "--- a/P.java\n+++ b/P.java\n@@ -1 +1 @@\n-x\n+y\n"});
  EXPECT_EQ(from_diff.code, 0) << from_diff.err;
  const auto missing = predict({});
  EXPECT_NE(missing.code, 0);
  EXPECT_NE(missing.err.find("input"), std::string::npos) << missing.err;
}

TEST(Predict, CheckpointWithoutEmbeddingSourceFails) {
  const auto dir = testing::ScratchDir("cli_no_source");
  qa::ModelConfig config;
  config.hidden_size = 2;
  qa::SaveCheckpoint(qa::QaModel(4, config), dir / "m.ckpt");
  const auto r = Invoke({"predict", "--model", (dir / "m.ckpt").string(), "--bug-text", "a",
                         "--description", "b"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("embedding source"), std::string::npos) << r.err;
}

TEST(Hypothesis, SyntheticCorpusSupportsAndRepeats) {
  const auto dir = testing::ScratchDir("cli_hypothesis");
  const auto data = Synthetic(dir, 60);
  std::string first;
  for (const char* run : {"a", "b"}) {
    const auto r = Invoke({"hypothesis", "--dataset", data.string(), "--hash-dim", "16",
                           "--out", (dir / run).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const auto text = Slurp(dir / "a" / "hypothesis.json");
  EXPECT_EQ(text, Slurp(dir / "b" / "hypothesis.json"));
  const auto j = Json::parse(text);
  EXPECT_LT(j["original_median"].get<double>(), j["random_median"].get<double>());
  EXPECT_LT(j["mww"]["p_value"].get<double>(), 0.01);
}

TEST(Hypothesis, IdenticalTextsReportZeroVariance) {
  const auto dir = testing::ScratchDir("cli_degenerate");
  std::string text;
  for (int b = 0; b < 4; ++b) {
    const std::string id = "B" + std::to_string(b);
    text += R"({"kind":"bug","bug_id":")" + id + R"(","title":"same words","body":""})" "\n";
    text += R"({"kind":"patch","patch_id":")" + id + R"(-dev","bug_id":")" + id +
            R"(","diff":"--- a/F\n+++ b/F\n@@ -1 +1 @@\n-a\n+b\n","origin":"developer","label":"correct"})" "\n";
    text += R"({"kind":"description","patch_id":")" + id +
            R"(-dev","text":"same words","source":"human"})" "\n";
  }
  Spit(dir / "d.jsonl", text);
  const auto r = Invoke({"hypothesis", "--dataset", (dir / "d.jsonl").string(), "--out",
                         dir.string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("variance"), std::string::npos) << r.err;
}

TEST(Evaluate, SweepsScoresCsv) {
  const auto dir = testing::ScratchDir("cli_evaluate");
  Spit(dir / "s.csv",
       "patch_id,bug_id,label,score\n"
       "a,B1,1,0.7\n"
       "\"b,x\",B2,0,0.3\n"
       "c,B3,1,0.45\n"
       "d,B4,0,0.55\n");
  const auto r = Invoke({"evaluate", "--scores", (dir / "s.csv").string(), "--thresholds",
                         "0.4,0.5,0.6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["auc"].get<double>(), 0.75);
  ASSERT_EQ(j["sweep"].size(), 3u);
  EXPECT_EQ(j["sweep"][1]["tp"], 1);
  EXPECT_EQ(j["sweep"][1]["fp"], 1);
  EXPECT_EQ(j["sweep"][1]["fn"], 1);
  EXPECT_EQ(j["sweep"][1]["tn"], 1);
}

TEST(Run, UsageErrorsAndBinaryExitCode) {
  EXPECT_NE(Invoke({}).code, 0);
  EXPECT_NE(Invoke({"crossval"}).code, 0);  // --dataset is required
  EXPECT_NE(Invoke({"predict", "--model", "m", "--threshold", "1.5"}).code, 0);
  const char* binary = std::getenv("PATCHQA_CLI");
  if (binary == nullptr) GTEST_SKIP() << "PATCHQA_CLI not set";
  const std::string cmd = std::string(binary) + " ingest --dataset /nonexistent >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_NE(status, 0);
  EXPECT_EQ(std::system((std::string(binary) + " --help >/dev/null").c_str()), 0);
}

}  // namespace
}  // namespace patchqa::cli
