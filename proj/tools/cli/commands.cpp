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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/pipeline.hpp"
#include "cli/synthetic.hpp"
#include "patchqa/diffsum.hpp"

namespace patchqa::cli {

namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void AddEmbeddingFlags(CLI::App* cmd, EmbeddingConfig& e) {
  cmd->add_option("--embeddings", e.embeddings,
                  "Token vector file (\"dim D\" header, then \"token v1..vD\")");
  cmd->add_option("--hash-seed", e.hash_seed,
                  "Seed of hash-seeded vectors (also the unknown-token fallback)");
  cmd->add_option("--hash-dim", e.hash_dim, "Dimension of hash-seeded vectors")
      ->check(CLI::PositiveNumber);
}

void AddModelFlags(CLI::App* cmd, qa::ModelConfig& m) {
  cmd->add_option("--model-seed", m.seed, "Seed for initialization and shuffling");
  cmd->add_option("--epochs", m.epochs, "Training epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--lr", m.learning_rate, "Adam learning rate")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--hidden", m.hidden_size, "LSTM hidden size per direction")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-len", m.max_seq_len, "Maximum tokens per text")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--batch", m.batch_size, "Mini-batch size")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Patch correctness prediction as bug-report question answering",
               "patchqa"};
  app.set_config("--config", "", "TOML/INI file with flag values; flags win");
  app.require_subcommand(1);

  RunConfig rc;
  std::string out_dir = "out";

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load, validate and deduplicate a dataset");
  ingest->add_option("--dataset", rc.dataset, "Line-delimited JSON dataset")->required();
  std::string summary_path;
  ingest->add_option("--out", summary_path, "Also write the summary JSON here");

  // crossval
  auto* crossval = app.add_subcommand("crossval", "Grouped k-fold training and evaluation");
  crossval->add_option("--dataset", rc.dataset)->required();
  AddEmbeddingFlags(crossval, rc.embedding);
  AddModelFlags(crossval, rc.model);
  crossval->add_option("--k", rc.k, "Number of bug groups")->check(CLI::PositiveNumber);
  crossval->add_option("--fold-seed", rc.fold_seed);
  crossval->add_option("--pair-seed", rc.pair_seed);
  crossval->add_option("--threshold", rc.threshold, "Operating threshold")
      ->check(CLI::Range(0.0, 1.0));
  crossval->add_option("--thresholds", rc.thresholds, "Sweep thresholds, ascending")
      ->delimiter(',');
  crossval->add_option("--threads", rc.threads, "Folds trained in parallel")
      ->check(CLI::PositiveNumber);
  crossval->add_option("--out", out_dir, "Output directory");

  // train
  auto* train = app.add_subcommand("train", "Train one model on the whole dataset");
  train->add_option("--dataset", rc.dataset)->required();
  AddEmbeddingFlags(train, rc.embedding);
  AddModelFlags(train, rc.model);
  train->add_option("--pair-seed", rc.pair_seed);
  train->add_option("--out", out_dir, "Output directory (model.ckpt)");

  // predict
  auto* predict = app.add_subcommand("predict", "Score one bug report / patch pair");
  std::string model_path, bug_text, bug_file, description, diff_text, diff_file;
  std::string predict_embeddings;
  double predict_threshold = 0.5;
  predict->add_option("--model", model_path, "Checkpoint file")->required();
  predict->add_option("--embeddings", predict_embeddings,
                      "Vector file, for checkpoints trained on one");
  predict->add_option("--bug-text", bug_text, "Bug report text");
  predict->add_option("--bug-file", bug_file, "File holding the bug report");
  predict->add_option("--description", description, "Patch description");
  predict->add_option("--diff", diff_text, "Unified diff (summarized when no description)");
  predict->add_option("--diff-file", diff_file, "File holding the unified diff");
  predict->add_option("--threshold", predict_threshold)->check(CLI::Range(0.0, 1.0));

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Threshold sweep over a scores CSV");
  std::string scores_path;
  evaluate->add_option("--scores", scores_path, "patch_id,bug_id,label,score CSV")
      ->required();
  evaluate->add_option("--thresholds", rc.thresholds)->delimiter(',');
  std::string evaluation_out;
  evaluate->add_option("--out", evaluation_out, "Also write the JSON here");

  // hypothesis
  auto* hypothesis = app.add_subcommand(
      "hypothesis", "Distance study: original vs random bug/description pairs");
  hypothesis->add_option("--dataset", rc.dataset)->required();
  AddEmbeddingFlags(hypothesis, rc.embedding);
  hypothesis->add_option("--pair-seed", rc.pair_seed);
  hypothesis->add_option("--out", out_dir, "Output directory (hypothesis.json)");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic labeled dataset");
  SyntheticOptions so;
  std::string synth_out;
  synth->add_option("--bugs", so.bugs)->check(CLI::PositiveNumber);
  synth->add_option("--seed", so.seed);
  synth->add_option("--keywords", so.keywords)->check(CLI::PositiveNumber);
  synth->add_option("--apr-correct-rate", so.apr_correct_rate)
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--apr-incorrect", so.apr_incorrect_per_bug)
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--body-words", so.body_min_words)->check(CLI::NonNegativeNumber);
  synth->add_option("--body-spread", so.body_spread)->check(CLI::NonNegativeNumber);
  synth->add_flag("!--shuffle-keywords", so.keywords_lead,
                  "Scatter planted words among fillers instead of leading");
  synth->add_option("--out", synth_out, "Dataset file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  rc.out = out_dir;

  try {
    if (*ingest) {
      const auto text = IngestSummaryJson(Stage("ingest", [&] { return Ingest(rc.dataset); }));
      out << text;
      if (!summary_path.empty()) WriteText(summary_path, text);
    } else if (*crossval) {
      const auto r = CrossValidate(rc);
      out << "wrote " << (rc.out / "report.json").string() << ", scores.csv, "
          << "foldplan.json and " << r.folds.size() << " checkpoints\n";
      if (r.sweep.auc) out << "pooled auc " << *r.sweep.auc << '\n';
    } else if (*train) {
      const auto r = TrainAll(rc);
      const auto path = rc.out / "model.ckpt";
      Stage("output", [&] {
        std::filesystem::create_directories(rc.out);
        qa::SaveCheckpoint(r.model, path);
        return 0;
      });
      out << "wrote " << path.string() << "; final epoch loss "
          << r.epoch_loss.back() << '\n';
    } else if (*predict) {
      const auto model = Stage("load", [&] { return qa::LoadCheckpoint(model_path); });
      const auto emb = Stage("load", [&] {
        if (model.embedding_source().empty()) {
          throw InvalidArgument("checkpoint does not record its embedding source");
        }
        return ParseProviderTag(model.embedding_source(), predict_embeddings);
      });
      const std::string bug = Stage("input", [&] {
        if (!bug_file.empty()) return ReadText(bug_file);
        if (bug_text.empty()) throw InvalidArgument("missing --bug-text or --bug-file");
        return bug_text;
      });
      const std::string answer = Stage("input", [&] {
        if (!description.empty()) return description;
        std::string diff = diff_file.empty() ? diff_text : ReadText(diff_file);
        if (diff.empty()) {
          throw InvalidArgument("missing --description, --diff or --diff-file");
        }
        return diffsum::Summarize(diffsum::ParseUnifiedDiff(diff));
      });
      const auto provider = Stage("embed", [&] { return MakeProvider(emb); });
      const auto p = Stage("predict", [&] {
        return qa::Predict(model,
                           ToBatch(bug, answer, 0, *provider,
                                   model.config().max_seq_len),
                           predict_threshold);
      });
      out << "score " << p.score << '\n'
          << "verdict " << (p.label ? "correct" : "incorrect") << '\n';
    } else if (*evaluate) {
      const auto text = Stage("evaluate", [&] {
        return EvaluationJson(ReadScoresCsv(scores_path), rc.thresholds);
      });
      out << text;
      if (!evaluation_out.empty()) WriteText(evaluation_out, text);
    } else if (*hypothesis) {
      const auto r = HypothesisStudy(rc);
      Stage("output", [&] {
        WriteText(rc.out / "hypothesis.json", r.report_json);
        return 0;
      });
      out << "original median " << r.study.original_median << ", random median "
          << r.study.random_median << ", p " << r.study.test.p_value << '\n';
    } else if (*synth) {
      Stage("synth", [&] {
        std::filesystem::path p(synth_out);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        corpus::SaveDataset(MakeSyntheticDataset(so), p);
        return 0;
      });
      out << "wrote " << synth_out << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace patchqa::cli
