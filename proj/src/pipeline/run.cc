/*
 * Copyright 2026 The shapaudit Authors.
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

#include "shapaudit/pipeline/run.h"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <system_error>
#include <unordered_map>
#include <unordered_set>

#include <omp.h>

#include "shapaudit/errors.h"
#include "shapaudit/pipeline/csv.h"
#include "shapaudit/pipeline/predictor.h"
#include "shapaudit/stats/stats.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

namespace {

using report::Json;

constexpr const char* kOk = "ok";
constexpr const char* kSkipped = "skipped";
constexpr const char* kNotRequested = "not requested";
constexpr const char* kNeedsTwoModels = "not applicable: one model";

std::string_view ScopeName(GlobalScope scope) {
  return scope == GlobalScope::kFull ? "full" : "sample";
}

struct ModelRun {
  ModelSpec spec;
  std::string model_id;
  std::unique_ptr<Predictor> predictor;

  std::string evaluate_status = kSkipped;
  bool transport_failure = false;
  std::vector<PredictionRecord> predictions;
  MetricsBundle metrics;

  SamplingResult sample;
  std::string explain_status = kSkipped;
  std::optional<double> background_baseline;
  std::size_t explain_attempted = 0;
  // Explanations in sample order, then (full scope) the remaining instances
  // in dataset order.
  std::vector<ExplainedInstance> explained;
  std::vector<std::pair<std::string, std::string>> failures;

  std::string report_status = kSkipped;
  std::vector<WordStats> global_words;
  std::map<OutcomeCategory, CategoryReport> categories;

  bool evaluated() const { return evaluate_status == kOk; }
  bool explained_ok() const { return evaluate_status == kOk &&
                                     explain_status == kOk; }
};

std::string Failed(const std::exception& e) {
  return std::string("failed: ") + e.what();
}

// Deterministic background texts for the mean-prediction baseline.
std::vector<std::string> BackgroundTexts(const std::vector<Instance>& data,
                                         std::size_t size,
                                         std::uint64_t seed) {
  std::vector<std::size_t> idx(data.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed ^ text::Fnv1a64("background"));
  const std::size_t take = std::min(size, idx.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> texts;
  for (std::size_t i : idx) texts.push_back(data[i].text);
  return texts;
}

void Evaluate(ModelRun& run, const RunConfig& cfg,
              const std::vector<Instance>& data, std::ostream* log) {
  try {
    std::shared_ptr<ModelClient> client = MakeModelClient(run.spec.endpoint);
    run.model_id = client->Health();
    std::shared_ptr<PredictionCache> cache;
    if (cfg.use_cache && !IsMockEndpoint(run.spec.endpoint)) {
      const auto dir = cfg.cache_dir.empty() ? PredictionCache::DefaultDirectory()
                                             : cfg.cache_dir;
      cache = std::make_shared<PredictionCache>(
          dir, client->Identity() + "#" + run.model_id);
    }
    run.predictor = std::make_unique<Predictor>(
        client, cache, static_cast<std::size_t>(cfg.explainer.batch_size));
    run.predictions = PredictBatch(*run.predictor, data);
    std::vector<int> preds;
    std::vector<int> labels;
    for (const PredictionRecord& r : run.predictions) {
      preds.push_back(r.pred_label);
      labels.push_back(r.true_label);
    }
    run.metrics = ClassificationMetrics(preds, labels);
    run.evaluate_status = kOk;
  } catch (const TransportError& e) {
    run.transport_failure = true;
    run.evaluate_status = Failed(e);
  } catch (const std::exception& e) {
    run.evaluate_status = Failed(e);
  }
  if (log) *log << "[" << run.spec.name << "] evaluate: " << run.evaluate_status
                << "\n";
}

void Explain(ModelRun& run, const RunConfig& cfg,
             const std::vector<Instance>& data, std::ostream* log) {
  ExplainerConfig ecfg = cfg.explainer;
  ecfg.seed = cfg.seed;
  try {
    run.sample = StratifiedSample(run.predictions, cfg.cap, cfg.categories,
                                  cfg.seed);
    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < data.size(); ++i) {
      index_of.emplace(data[i].instance_id, i);
    }
    std::vector<std::size_t> todo;
    std::unordered_set<std::size_t> in_sample;
    for (const PredictionRecord& r : run.sample.records) {
      todo.push_back(index_of.at(r.instance_id));
      in_sample.insert(todo.back());
    }
    if (cfg.global_scope == GlobalScope::kFull) {
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (!in_sample.count(i)) todo.push_back(i);
      }
    }
    run.explain_attempted = todo.size();

    Predictor& predictor = *run.predictor;
    const PredictFn predict = predictor.AsPredictFn();
    if (ecfg.baseline == BaselineKind::kBackgroundMean) {
      run.background_baseline = BackgroundBaseline(
          BackgroundTexts(data, static_cast<std::size_t>(ecfg.background_size),
                          cfg.seed),
          predict, ecfg);
    }

    std::vector<std::string> texts;
    for (std::size_t i : todo) texts.push_back(data[i].text);
    std::unordered_map<std::string, TokenSequence> token_map;
    {
      std::vector<TokenSequence> seqs = predictor.Tokenize(texts);
      for (std::size_t k = 0; k < texts.size(); ++k) {
        token_map.emplace(texts[k], std::move(seqs[k]));
      }
    }
    const TokenizeFn tokenize = [&token_map](const std::string& text) {
      return token_map.at(text);
    };

    std::vector<InstanceExplanation> results(todo.size());
    const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t k = 0; k < todo.size(); ++k) {
      const std::size_t i = todo[k];
      results[k] = ExplainInstance(data[i], run.predictions[i], predict,
                                   tokenize, ecfg, run.background_baseline);
    }

    for (std::size_t k = 0; k < todo.size(); ++k) {
      const Instance& inst = data[todo[k]];
      if (!results[k].ok) {
        run.failures.emplace_back(inst.instance_id, results[k].error);
        continue;
      }
      try {
        run.explained.push_back(AssembleExplainedInstance(inst, results[k]));
      } catch (const std::exception& e) {
        run.failures.emplace_back(inst.instance_id, e.what());
      }
    }
    run.explain_status = kOk;
  } catch (const std::exception& e) {
    run.explain_status = Failed(e);
  }
  if (log) {
    *log << "[" << run.spec.name << "] explain: " << run.explain_status << " ("
         << run.explained.size() << "/" << run.explain_attempted
         << " explained; " << run.predictor->requests() << " requests, "
         << run.predictor->cache_hits() << " cache hits)\n";
  }
}

void BuildReports(ModelRun& run, const RunConfig& cfg,
                  std::vector<std::string>& warnings) {
  try {
    std::unordered_set<std::string> sampled;
    for (const PredictionRecord& r : run.sample.records) {
      sampled.insert(r.instance_id);
    }
    std::vector<ExplainedInstance> in_sample;
    for (const ExplainedInstance& e : run.explained) {
      if (sampled.count(e.instance_id)) in_sample.push_back(e);
    }
    if (run.explained.empty()) {
      warnings.push_back(run.spec.name +
                         ": no explained instances, global word ranking empty");
    } else {
      run.global_words = GlobalWordImportance(run.explained, cfg.min_count);
    }
    for (OutcomeCategory cat : cfg.categories) {
      run.categories[cat] = CategoryStats(in_sample, cat, cfg.category_top_k);
      if (run.categories[cat].n_instances == 0) {
        warnings.push_back(run.spec.name + ": no explained " +
                           std::string(CategoryName(cat)) + " instances");
      }
    }
    run.report_status = kOk;
  } catch (const std::exception& e) {
    run.report_status = Failed(e);
  }
}

ModelSummary Summarize(const ModelRun& run) {
  ModelSummary s;
  s.name = run.spec.name;
  for (const PredictionRecord& r : run.predictions) {
    s.instance_ids.push_back(r.instance_id);
  }
  s.metrics = run.metrics;
  s.global_words = run.global_words;
  s.categories = run.categories;
  return s;
}

class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void Write(const std::string& name, std::string_view content) {
    report::WriteFile(dir_ / name, content);
    written_.push_back(name);
  }
  void WriteJson(const std::string& name, const Json& j) {
    Write(name, j.dump(2) + "\n");
  }
  std::vector<std::string> written() const {
    std::vector<std::string> out = written_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

std::string MetricsTableCsv(const std::vector<ModelRun>& runs) {
  std::vector<const ModelRun*> ok;
  for (const ModelRun& r : runs) {
    if (r.evaluated()) ok.push_back(&r);
  }
  std::vector<std::string> header = {"metric"};
  for (const ModelRun* r : ok) header.push_back(r->spec.name);
  std::string out = csv::JoinRow(header) + "\n";
  const std::pair<const char*, double MetricsBundle::*> rows[] = {
      {"Accuracy", &MetricsBundle::accuracy},
      {"Precision", &MetricsBundle::precision},
      {"Recall", &MetricsBundle::recall},
      {"Binary F1", &MetricsBundle::f1_binary},
      {"Macro F1", &MetricsBundle::f1_macro},
      {"Weighted F1", &MetricsBundle::f1_weighted},
      {"False positive rate", &MetricsBundle::false_positive_rate},
  };
  for (const auto& [label, field] : rows) {
    std::vector<std::string> row = {label};
    for (const ModelRun* r : ok) {
      row.push_back(report::FormatFixed(r->metrics.*field, 4));
    }
    out += csv::JoinRow(row) + "\n";
  }
  return out;
}

std::string SummaryMarkdown(const RunConfig& cfg,
                            const std::vector<ModelRun>& runs,
                            const std::vector<Json>& comparisons,
                            const std::vector<std::string>& warnings) {
  std::string md = "# Audit summary\n\n";
  md += "Dataset: `" + cfg.dataset_path.generic_string() + "`, seed " +
        std::to_string(cfg.seed) + ", cap " + std::to_string(cfg.cap) +
        " per category.\n\n";
  md += "## Classification metrics\n\n| Metric |";
  for (const ModelRun& r : runs) md += " " + r.spec.name + " |";
  md += "\n|---|";
  for (std::size_t i = 0; i < runs.size(); ++i) md += "---|";
  md += "\n";
  const std::pair<const char*, double MetricsBundle::*> rows[] = {
      {"Accuracy", &MetricsBundle::accuracy},
      {"Precision", &MetricsBundle::precision},
      {"Recall", &MetricsBundle::recall},
      {"Binary F1", &MetricsBundle::f1_binary},
      {"Macro F1", &MetricsBundle::f1_macro},
      {"Weighted F1", &MetricsBundle::f1_weighted},
      {"False positive rate", &MetricsBundle::false_positive_rate},
  };
  for (const auto& [label, field] : rows) {
    md += std::string("| ") + label + " |";
    for (const ModelRun& r : runs) {
      md += " " + (r.evaluated() ? report::FormatFixed(r.metrics.*field, 4)
                                 : std::string("n/a")) + " |";
    }
    md += "\n";
  }

  md += "\n## Attribution magnitude by category\n\n| Model | Category | "
        "Instances | Mean abs phi |\n|---|---|---|---|\n";
  for (const ModelRun& r : runs) {
    for (const auto& [cat, rep] : r.categories) {
      md += "| " + r.spec.name + " | " + std::string(CategoryName(cat)) +
            " | " + std::to_string(rep.n_instances) + " | " +
            report::FormatFixed(rep.mean_abs_phi_per_instance, 4) + " |\n";
    }
  }

  for (const ModelRun& r : runs) {
    if (r.report_status != kOk) continue;
    md += "\n## Top indicators: " + r.spec.name + "\n\n";
    const std::size_t n = std::min(cfg.top_k, r.global_words.size());
    if (n == 0) md += "(none)\n";
    for (std::size_t i = 0; i < n; ++i) {
      const WordStats& w = r.global_words[i];
      md += std::to_string(i + 1) + ". `" + w.word_key + "` mean abs phi " +
            report::FormatFixed(w.mean_abs_phi, 4) + ", mean phi " +
            report::FormatFixed(w.mean_signed_phi, 4) + ", n = " +
            std::to_string(w.count) + "\n";
    }
  }

  for (const Json& c : comparisons) {
    md += "\n## Comparison: " + c["model_a"].get<std::string>() + " vs " +
          c["model_b"].get<std::string>() + "\n\n";
    const Json& mc = c["mcnemar"];
    if (mc["applicable"].get<bool>()) {
      md += "McNemar chi2 = " + report::FormatFixed(mc["chi2"].get<double>(), 3) +
            ", p = " + report::FormatFixed(mc["p_value"].get<double>(), 4);
      if (mc["small_sample"].get<bool>()) md += " (fewer than 25 discordant pairs)";
      md += "\n";
    } else {
      md += "McNemar test not applicable: no discordant pairs.\n";
    }
    if (c.contains("attribution")) {
      const Json& a = c["attribution"];
      md += "\nFalse positives: " +
            std::to_string(a["false_positives"]["count_a"].get<long long>()) +
            " vs " +
            std::to_string(a["false_positives"]["count_b"].get<long long>()) +
            ". Shared top indicators: " +
            std::to_string(a["top_indicators"]["shared"].size()) + " of " +
            std::to_string(a["top_k"].get<std::size_t>()) + ".\n";
    }
  }

  if (!warnings.empty()) {
    md += "\n## Notes\n\n";
    for (const std::string& w : warnings) md += "- " + w + "\n";
  }
  return md;
}

bool Requested(const std::set<Stage>& stages, Stage s) {
  return stages.count(s) > 0;
}

}  // namespace

ModelSpec ParseModelSpec(const std::string& spec) {
  ModelSpec out;
  const std::size_t eq = spec.find('=');
  const std::size_t colon = spec.find(':');
  if (eq != std::string::npos && (colon == std::string::npos || eq < colon)) {
    out.name = spec.substr(0, eq);
    out.endpoint = spec.substr(eq + 1);
  } else {
    out.endpoint = spec;
  }
  if (out.endpoint.empty()) throw ContractViolation("empty model endpoint");
  if (out.name.empty()) {
    if (IsMockEndpoint(out.endpoint)) {
      out.name = std::filesystem::path(out.endpoint.substr(5)).stem().string();
    } else {
      std::string host = out.endpoint;
      if (host.rfind("http://", 0) == 0) host = host.substr(7);
      out.name = host;
    }
  }
  out.name = report::SanitizeName(out.name);
  return out;
}

void RunConfig::Validate() const {
  if (models.empty()) throw ContractViolation("at least one model is required");
  std::set<std::string> names;
  for (const ModelSpec& m : models) {
    if (!names.insert(m.name).second) {
      throw ContractViolation("duplicate model name '" + m.name +
                              "'; use name=endpoint to disambiguate");
    }
  }
  if (dataset_path.empty()) throw ContractViolation("dataset path is required");
  if (out_dir.empty()) throw ContractViolation("output directory is required");
  if (categories.empty()) throw ContractViolation("no categories to sample");
  if (top_k == 0 || category_top_k == 0 || min_count == 0) {
    throw ContractViolation("top_k, category_top_k and min_count must be >= 1");
  }
  if (workers < 0) throw ContractViolation("workers must be >= 0");
  explainer.Validate();
}

Json RunConfig::ToJson() const {
  Json j;
  j["dataset_path"] = dataset_path.generic_string();
  j["dataset_format"] = dataset_format == DatasetFormat::kCsv     ? "csv"
                        : dataset_format == DatasetFormat::kJsonl ? "jsonl"
                                                                  : "auto";
  Json ms = Json::array();
  for (const ModelSpec& m : models) {
    ms.push_back({{"name", m.name}, {"endpoint", m.endpoint}});
  }
  j["models"] = std::move(ms);
  j["seed"] = seed;
  j["cap"] = cap;
  Json cats = Json::array();
  for (OutcomeCategory c : categories) cats.push_back(CategoryName(c));
  j["categories"] = std::move(cats);
  j["global_scope"] = ScopeName(global_scope);
  j["top_k"] = top_k;
  j["category_top_k"] = category_top_k;
  j["min_count"] = min_count;
  j["word_categories"] = word_categories.empty()
                             ? Json(nullptr)
                             : Json(word_categories.generic_string());
  Json e;
  e["exact_max_tokens"] = explainer.exact_max_tokens;
  e["n_permutations"] = explainer.n_permutations;
  e["mask_policy"] = MaskPolicyName(explainer.mask_policy);
  e["mask_string"] = explainer.mask_string;
  e["baseline"] = BaselineKindName(explainer.baseline);
  e["background_size"] = explainer.background_size;
  e["batch_size"] = explainer.batch_size;
  e["max_sequence_tokens"] = explainer.max_sequence_tokens;
  j["explainer"] = std::move(e);
  return j;
}

RunOutcome RunAudit(const RunConfig& cfg, const std::set<Stage>& requested,
                    std::ostream* log) {
  cfg.Validate();
  std::set<Stage> stages = requested;
  stages.insert(Stage::kEvaluate);
  const bool want_compare =
      Requested(stages, Stage::kCompare) && cfg.models.size() >= 2;
  const bool want_reports = Requested(stages, Stage::kReport) || want_compare;
  const bool want_explain = Requested(stages, Stage::kExplain) || want_reports;

  const std::vector<Instance> data =
      LoadDataset(cfg.dataset_path, cfg.dataset_format);
  std::map<std::string, std::string> lexicon;
  if (!cfg.word_categories.empty()) {
    lexicon = LoadWordCategories(cfg.word_categories);
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.out_dir)) {
    throw IoError("cannot create output directory " + cfg.out_dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
  if (log) *log << "loaded " << data.size() << " instances\n";

  std::vector<ModelRun> runs(cfg.models.size());
  std::vector<std::string> warnings;
  for (std::size_t m = 0; m < runs.size(); ++m) {
    ModelRun& run = runs[m];
    run.spec = cfg.models[m];
    Evaluate(run, cfg, data, log);
    if (!run.evaluated()) continue;
    if (want_explain) Explain(run, cfg, data, log);
    for (const std::string& w : run.sample.warnings) {
      warnings.push_back(run.spec.name + ": " + w);
    }
    if (want_reports && run.explained_ok()) BuildReports(run, cfg, warnings);
  }

  // Emission starts here; everything below is single-threaded.
  OutputWriter out(cfg.out_dir);

  for (const ModelRun& run : runs) {
    if (!run.evaluated()) continue;
    const std::string& name = run.spec.name;
    Json mj;
    mj["schema_version"] = report::kSchemaVersion;
    mj["model"] = name;
    mj["model_id"] = run.model_id;
    mj["metrics"] = report::ToJson(run.metrics);
    out.WriteJson("metrics_" + name + ".json", mj);
    std::string preds;
    for (const PredictionRecord& r : run.predictions) {
      preds += report::ToJson(r).dump() + "\n";
    }
    out.Write("predictions_" + name + ".jsonl", preds);
    if (want_explain && run.explain_status == kOk) {
      std::string lines;
      for (const ExplainedInstance& e : run.explained) {
        lines += report::ToJson(e).dump() + "\n";
      }
      out.Write("explained_" + name + ".jsonl", lines);
    }
  }
  out.Write("metrics_table.csv", MetricsTableCsv(runs));

  if (Requested(stages, Stage::kReport)) {
    std::string magnitude = "model,category,n_instances,mean_abs_phi_per_instance\n";
    for (const ModelRun& run : runs) {
      if (run.report_status != kOk) continue;
      const std::string& name = run.spec.name;
      out.Write("global_words_" + name + ".csv",
                report::WordStatsCsv(run.global_words));
      const std::size_t k = std::min(cfg.top_k, run.global_words.size());
      out.Write("top_indicators_" + name + ".csv",
                report::WordStatsCsv(std::span(run.global_words).first(k)));

      const std::size_t ck = std::min(cfg.category_top_k, run.global_words.size());
      Composition global_comp = WordCategoryComposition(
          std::span(run.global_words).first(ck), lexicon);
      out.Write("composition_" + name + ".csv",
                report::CompositionCsv(global_comp));
      for (const std::string& w : global_comp.warnings) {
        warnings.push_back(name + ": " + w);
      }

      for (const auto& [cat, rep] : run.categories) {
        const std::string cname(CategoryName(cat));
        Json cj;
        cj["schema_version"] = report::kSchemaVersion;
        cj["model"] = name;
        cj.update(report::ToJson(rep));
        Composition comp = WordCategoryComposition(rep.top_words, lexicon);
        cj["composition"] = report::ToJson(comp);
        if (rep.n_instances == 0) {
          cj["note"] = "no " + cname + " instances were explained";
        }
        out.WriteJson("category_" + cname + "_" + name + ".json", cj);
        out.Write("composition_" + cname + "_" + name + ".csv",
                  report::CompositionCsv(comp));
        magnitude += csv::JoinRow(
                         {name, cname, std::to_string(rep.n_instances),
                          report::FormatDouble(rep.mean_abs_phi_per_instance)}) +
                     "\n";
      }
    }
    out.Write("magnitude_by_category.csv", magnitude);
  }

  std::vector<Json> comparisons;
  std::string compare_status = kNotRequested;
  if (Requested(stages, Stage::kCompare)) {
    if (cfg.models.size() < 2) {
      compare_status = kNeedsTwoModels;
    } else {
      compare_status = kOk;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
          const ModelRun& a = runs[i];
          const ModelRun& b = runs[j];
          if (!a.evaluated() || !b.evaluated()) {
            compare_status = "partial: a model failed to evaluate";
            continue;
          }
          Json c;
          c["model_a"] = a.spec.name;
          c["model_b"] = b.spec.name;
          std::vector<int> pa, pb, labels;
          for (std::size_t k = 0; k < a.predictions.size(); ++k) {
            pa.push_back(a.predictions[k].pred_label);
            pb.push_back(b.predictions[k].pred_label);
            labels.push_back(a.predictions[k].true_label);
          }
          const ContingencyTable table = BuildContingency(pa, pb, labels);
          c["contingency"] = report::ToJson(table);
          c["mcnemar"] = report::ToJson(McNemar(table));
          if (a.report_status == kOk && b.report_status == kOk) {
            try {
              c["attribution"] = report::ToJson(
                  CompareModels(Summarize(a), Summarize(b), cfg.top_k));
            } catch (const std::exception& e) {
              compare_status = Failed(e);
            }
          } else {
            compare_status = "partial: attribution reports unavailable";
          }
          comparisons.push_back(std::move(c));
        }
      }
      Json cj;
      cj["schema_version"] = report::kSchemaVersion;
      cj["comparisons"] = comparisons;
      out.WriteJson("comparison.json", cj);
    }
  }

  if (Requested(stages, Stage::kReport)) {
    out.Write("summary.md", SummaryMarkdown(cfg, runs, comparisons, warnings));
  }

  // Manifest.
  RunOutcome outcome;
  bool any_transport = false;
  bool any_problem = false;
  Json manifest;
  manifest["schema_version"] = report::kSchemaVersion;
  manifest["tool"] = "shapaudit";
  Json stage_names = Json::array();
  for (Stage s : {Stage::kEvaluate, Stage::kExplain, Stage::kReport,
                  Stage::kCompare}) {
    if (!Requested(stages, s)) continue;
    stage_names.push_back(s == Stage::kEvaluate  ? "evaluate"
                          : s == Stage::kExplain ? "explain"
                          : s == Stage::kReport  ? "report"
                                                 : "compare");
  }
  manifest["stages_requested"] = std::move(stage_names);
  manifest["config"] = cfg.ToJson();
  {
    Json d;
    d["n_instances"] = data.size();
    std::size_t positives = 0;
    std::string all;
    for (const Instance& inst : data) {
      positives += inst.label == kBiased;
      all += inst.instance_id + '\x1f' + inst.text + '\x1f' +
             std::to_string(inst.label) + '\x1e';
    }
    const std::uint64_t h = text::Fnv1a64(all);
    d["n_biased"] = positives;
    d["n_non_biased"] = data.size() - positives;
    d["content_fnv1a64"] = text::Hex64(h);
    manifest["dataset"] = std::move(d);
  }

  Json models = Json::array();
  for (const ModelRun& run : runs) {
    Json mj;
    mj["name"] = run.spec.name;
    mj["endpoint"] = run.spec.endpoint;
    mj["model_id"] = run.model_id;
    Json st;
    st["evaluate"] = run.evaluate_status;
    st["explain"] = want_explain ? run.explain_status : kNotRequested;
    st["report"] = want_reports ? run.report_status : kNotRequested;
    mj["stages"] = std::move(st);
    if (run.transport_failure) any_transport = true;
    if (run.evaluate_status != kOk) {
      any_problem = true;
      outcome.problems.push_back(run.spec.name + " evaluate " +
                                 run.evaluate_status);
    }
    if (run.evaluated()) {
      Json counts;
      counts["evaluated"] = run.predictions.size();
      Json by_cat;
      for (OutcomeCategory c : kAllCategories) {
        by_cat[std::string(CategoryName(c))] =
            c == OutcomeCategory::kTP   ? run.metrics.counts.tp
            : c == OutcomeCategory::kFP ? run.metrics.counts.fp
            : c == OutcomeCategory::kTN ? run.metrics.counts.tn
                                        : run.metrics.counts.fn;
      }
      counts["by_category"] = std::move(by_cat);
      mj["counts"] = std::move(counts);
    }
    if (want_explain && run.evaluated()) {
      if (run.explain_status != kOk) {
        any_problem = true;
        outcome.problems.push_back(run.spec.name + " explain " +
                                   run.explain_status);
      }
      Json sampled;
      for (OutcomeCategory c : cfg.categories) {
        Json ids = Json::array();
        for (const PredictionRecord& r : run.sample.records) {
          if (Categorize(r.pred_label, r.true_label) == c) {
            ids.push_back(r.instance_id);
          }
        }
        sampled[std::string(CategoryName(c))] = std::move(ids);
      }
      mj["sampled"] = std::move(sampled);
      Json ex;
      ex["attempted"] = run.explain_attempted;
      ex["succeeded"] = run.explained.size();
      ex["failed"] = run.failures.size();
      if (run.background_baseline) {
        ex["background_baseline"] = *run.background_baseline;
      }
      mj["explanations"] = std::move(ex);
      Json failures = Json::array();
      for (const auto& [id, err] : run.failures) {
        failures.push_back({{"instance_id", id}, {"error", err}});
      }
      mj["failures"] = std::move(failures);
      if (!run.failures.empty()) {
        any_problem = true;
        outcome.problems.push_back(run.spec.name + ": " +
                                   std::to_string(run.failures.size()) +
                                   " explanations failed");
      }
    }
    if (want_reports && run.explained_ok() && run.report_status != kOk) {
      any_problem = true;
      outcome.problems.push_back(run.spec.name + " report " +
                                 run.report_status);
    }
    models.push_back(std::move(mj));
  }
  manifest["models"] = std::move(models);
  manifest["compare"] = compare_status;
  if (compare_status != kOk && compare_status != kNotRequested &&
      compare_status != kNeedsTwoModels) {
    any_problem = true;
    outcome.problems.push_back("compare " + compare_status);
  }
  manifest["warnings"] = warnings;

  outcome.exit_code = any_transport ? kExitTransport
                      : any_problem ? kExitPartial
                                    : kExitOk;
  outcome.files_written = out.written();
  outcome.files_written.push_back("manifest.json");
  std::sort(outcome.files_written.begin(), outcome.files_written.end());
  manifest["outputs"] = outcome.files_written;
  manifest["exit_code"] = outcome.exit_code;
  out.WriteJson("manifest.json", manifest);
  return outcome;
}

}  // namespace shapaudit
