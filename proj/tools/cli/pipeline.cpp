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

#include "cli/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "patchqa/diffsum.hpp"
#include "patchqa/random.hpp"

namespace patchqa::cli {

namespace {

using Json = nlohmann::ordered_json;

Json OptionalJson(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename F>
std::optional<double> Defined(F&& f) {
  try {
    return f();
  } catch (const UndefinedMetric&) {
    return std::nullopt;
  }
}

std::string FormatDouble(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back().push_back(c);
    }
  }
  return fields;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

Json ModelConfigJson(const qa::ModelConfig& m) {
  return Json{{"max_seq_len", m.max_seq_len},   {"hidden_size", m.hidden_size},
              {"learning_rate", m.learning_rate}, {"epochs", m.epochs},
              {"batch_size", m.batch_size},     {"model_seed", m.seed}};
}

Json RunConfigJson(const RunConfig& c) {
  Json j;
  j["dataset"] = c.dataset;
  j["embedding"] = Json{{"source", ProviderTag(c.embedding)},
                        {"file", c.embedding.embeddings}};
  j["model"] = ModelConfigJson(c.model);
  j["k"] = c.k;
  j["seeds"] = Json{{"model", c.model.seed},
                    {"fold", c.fold_seed},
                    {"pairing", c.pair_seed},
                    {"hash", c.embedding.hash_seed}};
  j["threshold"] = c.threshold;
  j["thresholds"] = c.thresholds;
  return j;
}

Json SweepJson(const eval::ThresholdSweep& sweep) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
    const auto& cm = sweep.matrices[i];
    rows.push_back(Json{{"threshold", sweep.thresholds[i]},
                        {"tp", cm.tp},
                        {"tn", cm.tn},
                        {"fp", cm.fp},
                        {"fn", cm.fn},
                        {"plus_recall", OptionalJson(sweep.plus_recall[i])},
                        {"minus_recall", OptionalJson(sweep.minus_recall[i])},
                        {"f1", OptionalJson(sweep.f1[i])}});
  }
  return rows;
}

Json MwwJson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 3 || b.size() < 3) return nullptr;
  try {
    const auto r = eval::MannWhitneyU(a, b);
    return Json{{"u_statistic", r.u_statistic},
                {"z", r.z},
                {"p_value", r.p_value}};
  } catch (const UndefinedMetric&) {
    return nullptr;
  }
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0
                   : std::accumulate(v.begin(), v.end(), 0.0) /
                         static_cast<double>(v.size());
}

std::optional<double> MeanOfDefined(const std::vector<FoldResult>& folds,
                                    std::optional<double> FoldResult::*field) {
  std::vector<double> values;
  for (const auto& f : folds) {
    if (f.*field) values.push_back(*(f.*field));
  }
  if (values.empty()) return std::nullopt;
  return Mean(values);
}

std::vector<pairing::QaExample> BuildLabeledExamples(const RunConfig& config,
                                                     corpus::Dataset& dataset) {
  dataset = Stage("ingest", [&] { return Ingest(config.dataset).dataset; });
  return Stage("pairing", [&] {
    return pairing::BuildExamples(dataset, config.pair_seed);
  });
}

}  // namespace

std::unique_ptr<embed::EmbeddingProvider> MakeProvider(
    const EmbeddingConfig& config) {
  if (!config.embeddings.empty()) {
    return std::make_unique<embed::FileBackedEmbedding>(
        embed::FileBackedEmbedding::Load(config.embeddings, config.hash_seed));
  }
  return std::make_unique<embed::HashSeededEmbedding>(config.hash_dim,
                                                      config.hash_seed);
}

std::string ProviderTag(const EmbeddingConfig& config) {
  if (!config.embeddings.empty()) {
    return "file:" + std::to_string(config.hash_seed);
  }
  return "hash:" + std::to_string(config.hash_dim) + ":" +
         std::to_string(config.hash_seed);
}

EmbeddingConfig ParseProviderTag(const std::string& tag,
                                 const std::string& embeddings_path) {
  EmbeddingConfig c;
  auto number = [&tag](std::string_view s, auto& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError("bad embedding tag \"" + tag + "\"");
    }
  };
  const std::string_view t = tag;
  if (t.starts_with("hash:")) {
    const auto rest = t.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("bad embedding tag \"" + tag + "\"");
    }
    number(rest.substr(0, colon), c.hash_dim);
    number(rest.substr(colon + 1), c.hash_seed);
    return c;
  }
  if (t.starts_with("file:")) {
    number(t.substr(5), c.hash_seed);
    if (embeddings_path.empty()) {
      throw InvalidArgument(
          "checkpoint was trained on an embedding file; pass --embeddings");
    }
    c.embeddings = embeddings_path;
    return c;
  }
  throw ParseError("bad embedding tag \"" + tag + "\"");
}

qa::BatchExample ToBatch(const std::string& bug_text,
                         const std::string& description_text, int label,
                         const embed::EmbeddingProvider& provider,
                         std::size_t max_seq_len) {
  return {embed::PrepareText(bug_text, provider, max_seq_len),
          embed::PrepareText(description_text, provider, max_seq_len), label};
}

IngestResult Ingest(const std::filesystem::path& path) {
  const auto raw = corpus::LoadDataset(path);
  IngestResult r{corpus::DedupPatches(raw), 0};
  r.duplicates_removed = raw.patches().size() - r.dataset.patches().size();
  return r;
}

std::string IngestSummaryJson(const IngestResult& ingest) {
  const auto& d = ingest.dataset;
  std::map<std::string, long> by_label, by_origin, by_source;
  for (const auto& [id, p] : d.patches()) {
    by_label[std::string(corpus::ToString(p.label))]++;
    by_origin[corpus::ToString(p.origin)]++;
  }
  for (const auto& [id, desc] : d.descriptions()) {
    by_source[std::string(corpus::ToString(desc.source))]++;
  }
  Json j;
  j["bugs"] = d.bugs().size();
  j["patches"] = d.patches().size();
  j["patches_by_label"] = by_label;
  j["patches_by_origin"] = by_origin;
  j["descriptions"] = d.descriptions().size();
  j["descriptions_by_source"] = by_source;
  j["duplicates_removed"] = ingest.duplicates_removed;
  return j.dump(2) + "\n";
}

CrossValidationResult CrossValidate(const RunConfig& config,
                                    bool write_outputs) {
  Stage("config", [&] {
    config.model.Validate();
    if (config.threads < 1) throw InvalidArgument("threads must be >= 1");
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
      throw InvalidArgument("threshold must lie in [0, 1]");
    }
    return 0;
  });

  corpus::Dataset dataset;
  const auto examples = BuildLabeledExamples(config, dataset);

  CrossValidationResult result;
  result.plan = Stage("folds", [&] {
    return pairing::MakeFoldPlan(pairing::ExampleBugIds(examples), config.k,
                                 config.fold_seed);
  });
  const auto groups = pairing::AssignGroups(examples, result.plan);

  const auto provider = Stage("embed", [&] { return MakeProvider(config.embedding); });
  const auto batches = Stage("embed", [&] {
    std::vector<qa::BatchExample> out;
    out.reserve(examples.size());
    for (const auto& e : examples) {
      out.push_back(ToBatch(e.bug_text, e.description_text, e.label, *provider,
                            config.model.max_seq_len));
    }
    return out;
  });

  std::map<std::string, std::string> bug_text;
  for (const auto& e : examples) bug_text.emplace(e.bug_id, e.bug_text);
  std::vector<std::string> bug_ids;
  for (const auto& [id, text] : bug_text) bug_ids.push_back(id);

  const int k = result.plan.k;
  struct FoldOutput {
    FoldResult summary;
    std::vector<std::pair<std::size_t, double>> scores;  // example index
    std::vector<std::pair<double, double>> ablation;     // before, after
    std::optional<qa::QaModel> model;
  };
  std::vector<FoldOutput> outputs(static_cast<std::size_t>(k));

  auto run_fold = [&](int fold) {
    FoldOutput& out = outputs[static_cast<std::size_t>(fold)];
    out.summary.fold = fold;
    std::vector<qa::BatchExample> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (groups[i] == fold) {
        test.push_back(i);
      } else {
        train.push_back(batches[i]);
      }
    }
    out.summary.train_examples = train.size();
    out.summary.test_examples = test.size();

    qa::ModelConfig mc = config.model;
    mc.seed = Mix64(config.model.seed ^ (0x1000ULL + static_cast<std::uint64_t>(fold)));
    auto trained = qa::Train(
        qa::QaModel::Initialize(static_cast<std::size_t>(provider->dim()), mc),
        train, mc);
    trained.model.set_embedding_source(ProviderTag(config.embedding));
    out.summary.epoch_loss = trained.epoch_loss;

    std::vector<eval::ScoredLabel> fold_scores;
    for (std::size_t i : test) {
      const double s = qa::Score(trained.model, batches[i]);
      out.scores.emplace_back(i, s);
      fold_scores.push_back({s, examples[i].label});
    }
    const auto cm = eval::ConfusionAt(fold_scores, config.threshold);
    out.summary.auc = Defined([&] { return eval::Auc(fold_scores); });
    out.summary.f1 = Defined([&] { return eval::F1(cm); });
    out.summary.plus_recall = Defined([&] { return eval::PlusRecall(cm); });
    out.summary.minus_recall = Defined([&] { return eval::MinusRecall(cm); });

    // Re-pair recalled positives with a random other bug report.
    Rng rng(Mix64(config.pair_seed ^ (0xab1a7e00ULL + static_cast<std::uint64_t>(fold))));
    for (const auto& [i, s] : out.scores) {
      const auto& e = examples[i];
      if (e.label != 1 || s < config.threshold || bug_ids.size() < 2) continue;
      std::size_t pick = rng.Below(bug_ids.size() - 1);
      const auto self = static_cast<std::size_t>(
          std::lower_bound(bug_ids.begin(), bug_ids.end(), e.bug_id) -
          bug_ids.begin());
      if (pick >= self) ++pick;
      const auto swapped =
          ToBatch(bug_text.at(bug_ids[pick]), e.description_text, 0, *provider,
                  config.model.max_seq_len);
      out.ablation.emplace_back(s, qa::Score(trained.model, swapped));
    }
    out.model = std::move(trained.model);
  };

  Stage("train", [&] {
    const int workers = std::min(config.threads, k);
    if (workers <= 1) {
      for (int f = 0; f < k; ++f) run_fold(f);
      return 0;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int f = next++; f < k; f = next++) {
          try {
            run_fold(f);
          } catch (...) {
            errors[static_cast<std::size_t>(f)] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return 0;
  });

  // Merge in fold order.
  std::vector<eval::ScoredLabel> pooled;
  std::vector<std::pair<double, double>> ablation;
  for (auto& out : outputs) {
    result.folds.push_back(out.summary);
    for (const auto& [i, s] : out.scores) {
      result.scores.push_back({examples[i], out.summary.fold, s});
      pooled.push_back({s, examples[i].label});
    }
    ablation.insert(ablation.end(), out.ablation.begin(), out.ablation.end());
  }

  Stage("evaluate", [&] {
    result.sweep = eval::SweepThresholds(pooled, config.thresholds);
    return 0;
  });

  if (!ablation.empty()) {
    MismatchAblation a;
    a.recalled_positives = ablation.size();
    std::vector<double> before, after;
    for (const auto& [b, af] : ablation) {
      before.push_back(b);
      after.push_back(af);
      if (af < config.threshold) ++a.fell_below_threshold;
    }
    a.mean_score_before = Mean(before);
    a.mean_score_after = Mean(after);
    a.fraction_below = static_cast<double>(a.fell_below_threshold) /
                       static_cast<double>(a.recalled_positives);
    result.ablation = a;
  }

  // Report.
  Json report;
  report["config"] = RunConfigJson(config);
  {
    long positives = 0;
    for (const auto& e : examples) positives += e.label;
    std::map<std::string, long> kinds;
    for (const auto& e : examples) kinds[std::string(pairing::ToString(e.kind))]++;
    report["counts"] = Json{{"bugs", bug_ids.size()},
                            {"examples", examples.size()},
                            {"positives", positives},
                            {"negatives", static_cast<long>(examples.size()) - positives},
                            {"by_kind", kinds}};
  }
  Json per_fold = Json::array();
  for (const auto& f : result.folds) {
    per_fold.push_back(Json{{"fold", f.fold},
                            {"train_examples", f.train_examples},
                            {"test_examples", f.test_examples},
                            {"test_bugs", result.plan.BugsInGroup(f.fold).size()},
                            {"epoch_loss", f.epoch_loss},
                            {"auc", OptionalJson(f.auc)},
                            {"f1", OptionalJson(f.f1)},
                            {"plus_recall", OptionalJson(f.plus_recall)},
                            {"minus_recall", OptionalJson(f.minus_recall)}});
  }
  report["per_fold"] = per_fold;
  report["mean"] =
      Json{{"auc", OptionalJson(MeanOfDefined(result.folds, &FoldResult::auc))},
           {"f1", OptionalJson(MeanOfDefined(result.folds, &FoldResult::f1))},
           {"plus_recall",
            OptionalJson(MeanOfDefined(result.folds, &FoldResult::plus_recall))},
           {"minus_recall",
            OptionalJson(MeanOfDefined(result.folds, &FoldResult::minus_recall))}};
  report["pooled"] = Json{{"auc", OptionalJson(result.sweep.auc)}};
  report["sweep"] = SweepJson(result.sweep);
  if (const auto best = result.sweep.BestIndex()) {
    report["best_threshold"] =
        Json{{"threshold", result.sweep.thresholds[*best]},
             {"plus_recall", OptionalJson(result.sweep.plus_recall[*best])},
             {"minus_recall", OptionalJson(result.sweep.minus_recall[*best])}};
  } else {
    report["best_threshold"] = nullptr;
  }

  Json stats;
  if (result.ablation) {
    const auto& a = *result.ablation;
    stats["mismatch_ablation"] =
        Json{{"recalled_positives", a.recalled_positives},
             {"mean_score_before", a.mean_score_before},
             {"mean_score_after", a.mean_score_after},
             {"fell_below_threshold", a.fell_below_threshold},
             {"fraction_below", a.fraction_below}};
  } else {
    stats["mismatch_ablation"] = nullptr;
  }
  {
    // Distinct-word counts of correctly vs incorrectly predicted examples.
    std::vector<double> bug_ok, bug_bad, desc_ok, desc_bad;
    for (const auto& s : result.scores) {
      const int predicted = s.score >= config.threshold ? 1 : 0;
      const bool ok = predicted == s.example.label;
      (ok ? bug_ok : bug_bad)
          .push_back(static_cast<double>(embed::DistinctWordCount(s.example.bug_text)));
      (ok ? desc_ok : desc_bad)
          .push_back(static_cast<double>(
              embed::DistinctWordCount(s.example.description_text)));
    }
    stats["length_study"] =
        Json{{"correct_predictions", bug_ok.size()},
             {"incorrect_predictions", bug_bad.size()},
             {"bug_mean_distinct_words", Json{{"correct", Mean(bug_ok)},
                                              {"incorrect", Mean(bug_bad)}}},
             {"description_mean_distinct_words",
              Json{{"correct", Mean(desc_ok)}, {"incorrect", Mean(desc_bad)}}},
             {"bug_mww", MwwJson(bug_ok, bug_bad)},
             {"description_mww", MwwJson(desc_ok, desc_bad)}};
  }
  {
    // Edit distance between human commit messages and the rule-based
    // summary of the same diff.
    std::vector<double> distances;
    for (const auto& [id, desc] : dataset.descriptions()) {
      if (desc.source != corpus::DescriptionSource::kHumanCommitMessage) continue;
      try {
        const auto hunks =
            diffsum::ParseUnifiedDiff(dataset.patches().at(id).diff);
        if (hunks.empty()) continue;
        distances.push_back(static_cast<double>(
            eval::Levenshtein(desc.text, diffsum::Summarize(hunks))));
      } catch (const ParseError&) {
      }
    }
    stats["description_levenshtein"] =
        Json{{"pairs", distances.size()},
             {"mean", distances.empty() ? Json(nullptr) : Json(Mean(distances))}};
  }
  report["statistics"] = stats;
  result.report_json = report.dump(2) + "\n";

  std::ostringstream csv;
  csv << "patch_id,bug_id,label,score\n";
  for (const auto& s : result.scores) {
    csv << CsvField(s.example.patch_id) << ',' << CsvField(s.example.bug_id)
        << ',' << s.example.label << ',' << FormatDouble(s.score) << '\n';
  }
  result.scores_csv = csv.str();
  result.foldplan_json = pairing::FoldPlanToJson(result.plan);

  if (write_outputs) {
    Stage("output", [&] {
      std::filesystem::create_directories(config.out);
      WriteFile(config.out / "report.json", result.report_json);
      WriteFile(config.out / "scores.csv", result.scores_csv);
      WriteFile(config.out / "foldplan.json", result.foldplan_json);
      for (std::size_t f = 0; f < outputs.size(); ++f) {
        qa::SaveCheckpoint(*outputs[f].model,
                           config.out / ("model_fold" + std::to_string(f) + ".ckpt"));
      }
      return 0;
    });
  }
  return result;
}

qa::TrainResult TrainAll(const RunConfig& config) {
  Stage("config", [&] {
    config.model.Validate();
    return 0;
  });
  corpus::Dataset dataset;
  const auto examples = BuildLabeledExamples(config, dataset);
  const auto provider = Stage("embed", [&] { return MakeProvider(config.embedding); });
  std::vector<qa::BatchExample> batches;
  Stage("embed", [&] {
    for (const auto& e : examples) {
      batches.push_back(ToBatch(e.bug_text, e.description_text, e.label,
                                *provider, config.model.max_seq_len));
    }
    return 0;
  });
  return Stage("train", [&] {
    auto r = qa::Train(qa::QaModel::Initialize(
                           static_cast<std::size_t>(provider->dim()), config.model),
                       batches, config.model);
    r.model.set_embedding_source(ProviderTag(config.embedding));
    return r;
  });
}

HypothesisResult HypothesisStudy(const RunConfig& config) {
  const auto dataset =
      Stage("ingest", [&] { return Ingest(config.dataset).dataset; });

  // Original pairs: every developer patch with a resolvable description.
  std::vector<std::pair<std::string, std::string>> originals;  // bug_id, text
  Stage("pairing", [&] {
    for (const auto& [id, patch] : dataset.patches()) {
      if (!patch.origin.developer) continue;
      const auto bug = dataset.FindBug(patch.bug_id);
      if (bug->Text().find_first_not_of(" \t\r\n") == std::string::npos) continue;
      if (auto d = pairing::ResolveDescription(dataset, patch)) {
        originals.emplace_back(patch.bug_id, std::move(*d));
      }
    }
    std::set<std::string> bugs;
    for (const auto& [b, d] : originals) bugs.insert(b);
    if (bugs.size() < 2) {
      throw InvalidArgument("hypothesis study needs at least two bugs with "
                            "developer patch descriptions");
    }
    return 0;
  });

  return Stage("study", [&] {
    const auto provider = MakeProvider(config.embedding);
    // Bug vectors (one per original pair), then description vectors.
    std::vector<std::vector<double>> vectors;
    for (const auto& [b, d] : originals) {
      vectors.push_back(
          embed::SentenceVector(dataset.FindBug(b)->Text(), *provider));
    }
    for (const auto& [b, d] : originals) {
      vectors.push_back(embed::SentenceVector(d, *provider));
    }
    const auto z = embed::Standardize(vectors);
    const std::size_t n = originals.size();

    std::vector<eval::VectorPair> original_pairs, random_pairs;
    Rng rng(Mix64(config.pair_seed ^ 0x68797030ULL));
    for (std::size_t i = 0; i < n; ++i) {
      original_pairs.emplace_back(z[i], z[n + i]);
      std::size_t j = rng.Below(n);
      while (originals[j].first == originals[i].first) j = rng.Below(n);
      random_pairs.emplace_back(z[i], z[n + j]);
    }
    HypothesisResult r;
    r.study = eval::EuclideanDistanceStudy(original_pairs, random_pairs);

    Json j;
    j["config"] = Json{{"dataset", config.dataset},
                       {"embedding", ProviderTag(config.embedding)},
                       {"seeds", Json{{"pairing", config.pair_seed},
                                      {"hash", config.embedding.hash_seed}}}};
    j["pairs"] = n;
    j["original_median"] = r.study.original_median;
    j["random_median"] = r.study.random_median;
    j["mww"] = Json{{"u_statistic", r.study.test.u_statistic},
                    {"z", r.study.test.z},
                    {"p_value", r.study.test.p_value}};
    j["original_closer"] = r.study.Supports(0.01);
    j["original_distances"] = r.study.original_distances;
    j["random_distances"] = r.study.random_distances;
    r.report_json = j.dump(2) + "\n";
    return r;
  });
}

std::vector<eval::ScoredLabel> ReadScoresCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scores file " + path.string());
  std::vector<eval::ScoredLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = SplitCsvLine(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "patch_id") continue;
    if (fields.size() != 4) {
      throw ParseError("expected 4 CSV fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    eval::ScoredLabel s;
    if (fields[2] == "1") {
      s.label = 1;
    } else if (fields[2] == "0") {
      s.label = 0;
    } else {
      throw ParseError("label must be 0 or 1", line_no);
    }
    const auto& f = fields[3];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), s.score);
    if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(s.score)) {
      throw ParseError("bad score \"" + f + "\"", line_no);
    }
    out.push_back(s);
  }
  return out;
}

std::string EvaluationJson(const std::vector<eval::ScoredLabel>& scores,
                           const std::vector<double>& thresholds) {
  const auto sweep = eval::SweepThresholds(scores, thresholds);
  Json j;
  j["examples"] = scores.size();
  j["auc"] = OptionalJson(sweep.auc);
  j["sweep"] = SweepJson(sweep);
  if (const auto best = sweep.BestIndex()) {
    j["best_threshold"] = sweep.thresholds[*best];
  } else {
    j["best_threshold"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace patchqa::cli
